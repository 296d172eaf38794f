//! Catalog of initial guesses, given in polar coordinates `u = rho cos(theta)`,
//! `v = rho sin(theta)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::boundary::perimeter;
use crate::fe::Discretization;
use crate::state::{interpolate, State};
use crate::tensors::UnknownName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GuessField {
    Disc,
    Ellipse,
    Paraboloid,
    Pringle,
    Shoehorn,
}

pub const ALL_GUESSES: [GuessField; 5] = [
    GuessField::Disc,
    GuessField::Ellipse,
    GuessField::Paraboloid,
    GuessField::Pringle,
    GuessField::Shoehorn,
];

impl GuessField {
    pub fn name(self) -> &'static str {
        match self {
            GuessField::Disc => "disc",
            GuessField::Ellipse => "ellipse",
            GuessField::Paraboloid => "paraboloid",
            GuessField::Pringle => "pringle",
            GuessField::Shoehorn => "shoehorn",
        }
    }

    pub fn eval(self, rho: f64, theta: f64) -> [f64; 3] {
        let (s, c) = theta.sin_cos();
        match self {
            GuessField::Disc => [-rho * s, rho * c, 0.0],
            GuessField::Ellipse => [rho * s, rho * c, rho * s],
            GuessField::Paraboloid => [rho * c, rho * s, -rho * rho],
            GuessField::Pringle => [rho * c, -rho * s, rho * rho * s * s],
            GuessField::Shoehorn => [
                rho * c,
                -rho * s,
                rho * s + (PI * rho / 2.0).sin() * (2.0 * theta).cos(),
            ],
        }
    }

    pub fn eval_cartesian(self, p: [f64; 2]) -> [f64; 3] {
        let [u, v] = p;
        self.eval(u.hypot(v), v.atan2(u))
    }
}

impl fmt::Display for GuessField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GuessField {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_GUESSES
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| UnknownName {
                kind: "guess",
                name: s.to_string(),
                expected: "disc, ellipse, paraboloid, pringle, shoehorn",
            })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GuessError {
    #[error("cannot rescale a guess whose boundary perimeter is {0}")]
    DegeneratePerimeter(f64),
}

/// Nodal interpolation of the guess; the multiplier starts at zero.
pub fn interpolate_guess(disc: &Discretization, guess: GuessField) -> State {
    interpolate(disc, |p| guess.eval_cartesian(p))
}

/// Scales the membrane coefficients so the boundary perimeter becomes `2 pi`.
pub fn rescale_to_perimeter(disc: &Discretization, state: &State) -> Result<State, GuessError> {
    let p = perimeter(disc, state);
    if !(p > 0.0 && p.is_finite()) {
        return Err(GuessError::DegeneratePerimeter(p));
    }
    Ok(state.with_scaled_membrane(2.0 * PI / p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate_disc_mesh;
    use crate::state::evaluate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn catalog_values() {
        assert!(close(GuessField::Disc.eval(1.0, PI / 2.0), [-1.0, 0.0, 0.0], 1e-15));
        assert!(close(GuessField::Paraboloid.eval(0.0, 1.3), [0.0, 0.0, 0.0], 0.0));
        assert!(close(GuessField::Shoehorn.eval(1.0, 0.0), [1.0, 0.0, 1.0], 1e-15));
        assert!(close(GuessField::Ellipse.eval(0.5, PI / 2.0), [0.5, 0.0, 0.5], 1e-15));
        assert!(close(GuessField::Pringle.eval(1.0, PI / 2.0), [0.0, -1.0, 1.0], 1e-15));
    }

    #[test]
    fn names_round_trip() {
        for g in ALL_GUESSES {
            assert_eq!(g.name().parse::<GuessField>().unwrap(), g);
        }
        let err = "saddle".parse::<GuessField>().unwrap_err();
        assert_eq!(err.name, "saddle");
    }

    #[test]
    fn finite_on_closed_disc() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for g in ALL_GUESSES {
            for _ in 0..100 {
                let v = g.eval(rng.random_range(0.0..=1.0), rng.random_range(0.0..2.0 * PI));
                assert!(v.iter().all(|x| x.is_finite()));
            }
        }
    }

    #[test]
    fn disc_and_paraboloid_are_reproduced() {
        let disc = Discretization::new(generate_disc_mesh(16, 0.5).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [GuessField::Disc, GuessField::Paraboloid] {
            let state = interpolate_guess(&disc, g);
            assert!(state.l.iter().all(|&l| l == 0.0));
            for _ in 0..100 {
                let cell = rng.random_range(0..disc.mesh().n_triangles());
                let (mut a, mut b): (f64, f64) = (rng.random(), rng.random());
                if a + b > 1.0 {
                    a = 1.0 - a;
                    b = 1.0 - b;
                }
                let p = disc.geometry(cell).map([a, b]);
                let (value, _) = evaluate(&disc, &state, cell, [a, b]);
                assert!(close(value, g.eval_cartesian(p), 1e-12));
            }
        }
    }

    #[test]
    fn rescale_factor_on_the_fine_polygon() {
        let disc = Discretization::new(generate_disc_mesh(252, 0.5).unwrap());
        let state = interpolate_guess(&disc, GuessField::Disc);
        let scaled = rescale_to_perimeter(&disc, &state).unwrap();
        let expected = 2.0 * PI / (2.0 * 252.0 * (PI / 252.0).sin());
        assert!((expected - 1.0000259).abs() < 1e-6);
        let (i, x) = state.x.iter().enumerate().find(|(_, x)| x.abs() > 0.5).unwrap();
        assert!((scaled.x[i] / x - expected).abs() < 1e-12);
        assert!((perimeter(&disc, &scaled) - 2.0 * PI).abs() < 1e-12 * 2.0 * PI);
    }

    #[test]
    fn rescale_is_idempotent_and_scale_invariant() {
        let disc = Discretization::new(generate_disc_mesh(16, 0.5).unwrap());
        let state = interpolate_guess(&disc, GuessField::Shoehorn);
        let once = rescale_to_perimeter(&disc, &state).unwrap();
        let twice = rescale_to_perimeter(&disc, &once).unwrap();
        let from_five = rescale_to_perimeter(&disc, &state.with_scaled_membrane(5.0)).unwrap();
        for i in 0..once.x.len() {
            assert!((once.x[i] - twice.x[i]).abs() <= 1e-12 * once.x[i].abs().max(1.0));
            assert!((once.x[i] - from_five.x[i]).abs() <= 1e-12 * once.x[i].abs().max(1.0));
        }
    }

    #[test]
    fn zero_state_cannot_be_rescaled() {
        let disc = Discretization::new(generate_disc_mesh(8, 1.0).unwrap());
        let zero = State::zeros(disc.layout());
        assert_eq!(
            rescale_to_perimeter(&disc, &zero),
            Err(GuessError::DegeneratePerimeter(0.0))
        );
    }
}
