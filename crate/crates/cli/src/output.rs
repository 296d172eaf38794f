//! Run artifacts: VTU snapshots of the membrane, the Newton iteration log,
//! the run summary and the boundary traction profile.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use plateau_core::fe::Discretization;
use plateau_core::forms::EnergyBreakdown;
use plateau_core::solver::NewtonReport;
use plateau_core::state::State;
use plateau_core::verify::{ShapeReport, TractionProfile, PERIMETER_TOL, SPEED_TOL};

/// VTK cell type of the six-node quadratic triangle.
pub const VTK_QUADRATIC_TRIANGLE: u8 = 22;

/// ASCII unstructured grid with six duplicated points per cell, so the
/// discontinuous field is represented exactly. Points are placed at the
/// membrane position `X`; the point data carry `X`, `|X|` and the reference
/// disc coordinates.
pub fn vtu_string(disc: &Discretization, state: &State) -> String {
    let n_cells = disc.mesh().n_triangles();
    let n_points = 6 * n_cells;
    let mut points = String::new();
    let mut magnitude = String::new();
    let mut reference = String::new();
    for c in 0..n_cells {
        for (a, x) in state.cell_coefficients(c).iter().enumerate() {
            let p = disc.node_position(c, a);
            let _ = writeln!(points, "{:e} {:e} {:e}", x[0], x[1], x[2]);
            let _ = writeln!(magnitude, "{:e}", (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt());
            let _ = writeln!(reference, "{:e} {:e} 0", p[0], p[1]);
        }
    }
    let mut connectivity = String::new();
    let mut offsets = String::new();
    let mut types = String::new();
    for c in 0..n_cells {
        let ids: Vec<String> = (6 * c..6 * c + 6).map(|i| i.to_string()).collect();
        let _ = writeln!(connectivity, "{}", ids.join(" "));
        let _ = writeln!(offsets, "{}", 6 * (c + 1));
        let _ = writeln!(types, "{VTK_QUADRATIC_TRIANGLE}");
    }
    let mut s = String::new();
    let _ = write!(
        s,
        r#"<?xml version="1.0"?>
<VTKFile type="UnstructuredGrid" version="1.0" byte_order="LittleEndian">
  <UnstructuredGrid>
    <Piece NumberOfPoints="{n_points}" NumberOfCells="{n_cells}">
      <PointData Vectors="X" Scalars="magnitude">
        <DataArray type="Float64" Name="X" NumberOfComponents="3" format="ascii">
{points}        </DataArray>
        <DataArray type="Float64" Name="magnitude" format="ascii">
{magnitude}        </DataArray>
        <DataArray type="Float64" Name="reference" NumberOfComponents="3" format="ascii">
{reference}        </DataArray>
      </PointData>
      <Points>
        <DataArray type="Float64" NumberOfComponents="3" format="ascii">
{points}        </DataArray>
      </Points>
      <Cells>
        <DataArray type="Int64" Name="connectivity" format="ascii">
{connectivity}        </DataArray>
        <DataArray type="Int64" Name="offsets" format="ascii">
{offsets}        </DataArray>
        <DataArray type="UInt8" Name="types" format="ascii">
{types}        </DataArray>
      </Cells>
    </Piece>
  </UnstructuredGrid>
</VTKFile>
"#
    );
    s
}

pub fn write_vtu(disc: &Discretization, state: &State, path: &Path) -> std::io::Result<()> {
    fs::write(path, vtu_string(disc, state))
}

/// One row per residual evaluation (the initial state is iteration 0). The
/// `status` column is empty except on the last row, which carries the
/// termination reason.
pub fn write_iteration_log(report: &NewtonReport, path: &Path) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["iter", "residual_norm", "step_length", "status"])?;
    let last = report.residual_norms.len() - 1;
    for (k, r) in report.residual_norms.iter().enumerate() {
        let step = if k == 0 { String::new() } else { format!("{:e}", report.step_lengths[k - 1]) };
        let status = if k == last { report.termination_reason.as_str() } else { "" };
        w.write_record([k.to_string(), format!("{r:e}"), step, status.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `key,value` rows describing the outcome of a run. Threshold rows are
/// labelled as the defaults they are.
pub fn summary_rows(report: &NewtonReport, energy: &EnergyBreakdown, shape: &ShapeReport) -> Vec<(String, String)> {
    let mut rows: Vec<(String, String)> = vec![
        ("termination_reason".into(), report.termination_reason.to_string()),
        ("converged".into(), report.converged.to_string()),
        ("iterations".into(), report.iterations.to_string()),
        ("initial_residual".into(), format!("{:e}", report.residual_norms[0])),
        ("final_residual".into(), format!("{:e}", report.final_residual())),
        ("residual_target".into(), format!("{:e}", report.target)),
    ];
    for (name, v) in energy.parts() {
        rows.push((format!("energy_{name}"), format!("{v:e}")));
    }
    rows.push(("energy_total".into(), format!("{:e}", energy.total)));
    let vec3 = |v: [f64; 3]| format!("{:e} {:e} {:e}", v[0], v[1], v[2]);
    rows.extend([
        ("perimeter".into(), format!("{:e}", shape.perimeter)),
        ("max_speed_violation".into(), format!("{:e}", shape.max_speed_violation)),
        ("l2_speed_violation".into(), format!("{:e}", shape.l2_speed_violation)),
        ("circularity".into(), format!("{:e}", shape.circularity)),
        ("planarity".into(), format!("{:e}", shape.planarity)),
        ("plane_normal".into(), vec3(shape.plane_normal)),
        ("plane_offset".into(), format!("{:e}", shape.plane_offset)),
        ("centroid".into(), vec3(shape.centroid)),
        ("self_intersection_hint".into(), shape.self_intersection_hint.to_string()),
        ("default_perimeter_tol".into(), format!("{PERIMETER_TOL:e}")),
        ("default_speed_tol".into(), format!("{SPEED_TOL:e}")),
        ("constraints_satisfied".into(), shape.constraints_satisfied().to_string()),
    ]);
    rows
}

pub fn write_summary(rows: &[(String, String)], path: &Path) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["key", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_traction(profile: &TractionProfile, path: &Path) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["theta", "f_x", "f_y", "f_z"])?;
    for (theta, f) in &profile.samples {
        w.write_record([theta, &f[0], &f[1], &f[2]].map(|v| format!("{v:e}")))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use plateau_core::mesh::Mesh;
    use plateau_core::solver::TerminationReason;

    fn four_triangles() -> Discretization {
        let v = vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]];
        let t = vec![[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]];
        Discretization::new(Mesh::from_parts(v, t).unwrap())
    }

    fn count_lines(block: &str) -> usize {
        block.lines().filter(|l| !l.trim().is_empty()).count()
    }

    fn data_array<'a>(s: &'a str, name: &str) -> &'a str {
        let start = s.find(&format!("Name=\"{name}\"")).unwrap();
        let body = &s[start..];
        let open = body.find('>').unwrap() + 1;
        let close = body.find("</DataArray>").unwrap();
        &body[open..close]
    }

    #[test]
    fn vtu_duplicates_points_per_cell() {
        let disc = four_triangles();
        let state = State::zeros(disc.layout());
        let s = vtu_string(&disc, &state);
        let n: usize = s.split("NumberOfPoints=\"").nth(1).unwrap().split('"').next().unwrap().parse().unwrap();
        assert_eq!(n, 24);
        assert!(s.contains("NumberOfCells=\"4\""));
        assert_eq!(count_lines(data_array(&s, "X")), 24);
        assert!(data_array(&s, "X").lines().filter(|l| !l.trim().is_empty()).all(|l| l == "0e0 0e0 0e0"));
        assert_eq!(count_lines(data_array(&s, "types")), 4);
        assert!(data_array(&s, "types").lines().all(|l| l.trim().is_empty() || l == "22"));
    }

    #[test]
    fn iteration_log_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("it.csv");
        let report = NewtonReport {
            converged: false,
            iterations: 1,
            residual_norms: vec![1.0, 0.5],
            step_lengths: vec![0.25],
            termination_reason: TerminationReason::LineSearchFailure,
            target: 1e-6,
            failure: Some("stalled".into()),
        };
        write_iteration_log(&report, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(
            text,
            "iter,residual_norm,step_length,status\n0,1e0,,\n1,5e-1,2.5e-1,line_search_failure\n"
        );
    }
}
