//! Triangulations of the unit disc.
//!
//! A [`Mesh`] owns the vertex coordinates and counterclockwise triangles plus
//! the derived edge topology used by the rest of the solver: interior edges
//! (shared by two cells, carrying the DG jump terms) and the boundary loop
//! ordered counterclockwise around the unit circle with unwrapped angle
//! ranges. Boundary and interior edges are always rebuilt from cell
//! connectivity; element tags in input files are ignored.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

/// Tolerance on `| |p| - 1 |` for boundary vertices of a constructed mesh.
pub const BOUNDARY_RADIUS_TOL: f64 = 1e-8;

/// Boundary vertices read from file are projected onto the circle when they
/// are this close to it, and rejected otherwise.
pub const BOUNDARY_PROJECTION_TOL: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("topology error: {0}")]
    Topology(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("invalid mesh parameters: {0}")]
    InvalidParameters(String),
}

/// An edge shared by exactly two triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorEdge {
    /// `(T+, T-)`.
    pub cells: [usize; 2],
    /// Endpoints in the counterclockwise order of `T+`.
    pub endpoints: [usize; 2],
    /// Unit normal pointing out of `T+`.
    pub normal: [f64; 2],
    pub length: f64,
}

impl InteriorEdge {
    /// The same edge seen from the other cell.
    pub fn flipped(&self) -> InteriorEdge {
        InteriorEdge {
            cells: [self.cells[1], self.cells[0]],
            endpoints: [self.endpoints[1], self.endpoints[0]],
            normal: [-self.normal[0], -self.normal[1]],
            length: self.length,
        }
    }
}

/// An edge of the polygonal boundary, owned by a single triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEdge {
    pub cell: usize,
    /// Endpoints ordered counterclockwise around the disc.
    pub endpoints: [usize; 2],
    /// Angles of the endpoints, unwrapped so that `theta_range.1 > theta_range.0`.
    pub theta_range: (f64, f64),
    pub outward_normal: [f64; 2],
    pub length: f64,
}

impl BoundaryEdge {
    pub fn theta_width(&self) -> f64 {
        self.theta_range.1 - self.theta_range.0
    }
}

/// A validated triangulation of the unit disc. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<[f64; 2]>,
    triangles: Vec<[usize; 3]>,
    interior_edges: Vec<InteriorEdge>,
    boundary_edges: Vec<BoundaryEdge>,
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

fn angle_of(p: [f64; 2]) -> f64 {
    let a = p[1].atan2(p[0]);
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

fn right_normal(a: [f64; 2], b: [f64; 2]) -> ([f64; 2], f64) {
    let t = [b[0] - a[0], b[1] - a[1]];
    let len = t[0].hypot(t[1]);
    ([t[1] / len, -t[0] / len], len)
}

/// Collects every edge with the cells that contain it, keyed by sorted
/// endpoints. Each cell entry records the endpoints in the cell's own order.
fn edge_incidence(
    triangles: &[[usize; 3]],
) -> Result<HashMap<(usize, usize), Vec<(usize, [usize; 2])>>, MeshError> {
    let mut map: HashMap<(usize, usize), Vec<(usize, [usize; 2])>> = HashMap::new();
    for (c, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let a = tri[k];
            let b = tri[(k + 1) % 3];
            let entry = map.entry((a.min(b), a.max(b))).or_default();
            entry.push((c, [a, b]));
            if entry.len() > 2 {
                return Err(MeshError::Topology(format!(
                    "edge ({a}, {b}) is shared by more than two triangles"
                )));
            }
        }
    }
    Ok(map)
}

impl Mesh {
    /// Builds and validates a mesh from raw vertices and counterclockwise
    /// triangles.
    pub fn from_parts(vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Result<Mesh, MeshError> {
        if triangles.is_empty() {
            return Err(MeshError::Topology("mesh has no triangles".into()));
        }
        let mut used = vec![false; vertices.len()];
        for (c, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= vertices.len() {
                    return Err(MeshError::Topology(format!(
                        "triangle {c} references missing vertex {v}"
                    )));
                }
                used[v] = true;
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::Topology(format!("triangle {c} repeats a vertex")));
            }
            let area = signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
            if !(area > 0.0) {
                return Err(MeshError::Geometry(format!(
                    "triangle {c} has non-positive signed area {area:e}"
                )));
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(MeshError::Topology(format!("vertex {v} belongs to no triangle")));
        }

        let incidence = edge_incidence(&triangles)?;
        let mut keys: Vec<_> = incidence.keys().copied().collect();
        keys.sort_unstable();

        let mut interior_edges = Vec::new();
        // start vertex -> (cell, end vertex)
        let mut boundary_next: HashMap<usize, (usize, usize)> = HashMap::new();
        for key in &keys {
            let cells = &incidence[key];
            match cells.as_slice() {
                [(c0, [a, b]), (c1, _)] => {
                    let (normal, length) = right_normal(vertices[*a], vertices[*b]);
                    interior_edges.push(InteriorEdge {
                        cells: [*c0, *c1],
                        endpoints: [*a, *b],
                        normal,
                        length,
                    });
                }
                [(c, [a, b])] => {
                    if boundary_next.insert(*a, (*c, *b)).is_some() {
                        return Err(MeshError::Topology(format!(
                            "boundary vertex {a} starts two boundary edges"
                        )));
                    }
                }
                _ => unreachable!(),
            }
        }
        if boundary_next.is_empty() {
            return Err(MeshError::Topology("mesh has no boundary".into()));
        }

        // Boundary vertices must lie on the unit circle.
        let mut starts: Vec<usize> = boundary_next.keys().copied().collect();
        starts.sort_unstable();
        for &v in &starts {
            let p = vertices[v];
            let r = p[0].hypot(p[1]);
            if (r - 1.0).abs() > BOUNDARY_RADIUS_TOL {
                return Err(MeshError::Geometry(format!(
                    "boundary vertex {v} at ({}, {}) has radius {r}, not on the unit circle",
                    p[0], p[1]
                )));
            }
        }

        let boundary_edges = Self::walk_boundary(&vertices, &triangles, &boundary_next)?;

        let n_edges = interior_edges.len() + boundary_edges.len();
        let euler = vertices.len() as i64 - n_edges as i64 + triangles.len() as i64;
        if euler != 1 {
            return Err(MeshError::Topology(format!(
                "Euler characteristic V - E + T = {euler}, expected 1 for a disc"
            )));
        }

        Ok(Mesh {
            vertices,
            triangles,
            interior_edges,
            boundary_edges,
        })
    }

    fn walk_boundary(
        vertices: &[[f64; 2]],
        triangles: &[[usize; 3]],
        next: &HashMap<usize, (usize, usize)>,
    ) -> Result<Vec<BoundaryEdge>, MeshError> {
        // Start from the boundary vertex with the smallest angle in [0, 2pi).
        let start = *next
            .keys()
            .min_by(|&&a, &&b| {
                angle_of(vertices[a])
                    .total_cmp(&angle_of(vertices[b]))
                    .then(a.cmp(&b))
            })
            .unwrap();

        let centroid = {
            let (mut cx, mut cy, mut total) = (0.0, 0.0, 0.0);
            for tri in triangles {
                let [a, b, c] = tri.map(|v| vertices[v]);
                let area = signed_area(a, b, c);
                cx += area * (a[0] + b[0] + c[0]) / 3.0;
                cy += area * (a[1] + b[1] + c[1]) / 3.0;
                total += area;
            }
            [cx / total, cy / total]
        };

        let mut edges = Vec::with_capacity(next.len());
        let theta0 = angle_of(vertices[start]);
        let mut theta = theta0;
        let mut v = start;
        loop {
            let Some(&(cell, w)) = next.get(&v) else {
                return Err(MeshError::Topology(format!(
                    "boundary loop is open at vertex {v}"
                )));
            };
            let (pa, pb) = (vertices[v], vertices[w]);
            let mut width = angle_of(pb) - angle_of(pa);
            if width <= 0.0 {
                width += 2.0 * PI;
            }
            if !(width > 0.0 && width < PI) {
                return Err(MeshError::Geometry(format!(
                    "boundary edge ({v}, {w}) spans an angle of {width} rad"
                )));
            }
            let theta_end = if w == start { theta0 + 2.0 * PI } else { theta + width };
            let (outward_normal, length) = right_normal(pa, pb);
            let mid = [0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])];
            let away = (mid[0] - centroid[0]) * outward_normal[0]
                + (mid[1] - centroid[1]) * outward_normal[1];
            if away <= 0.0 {
                return Err(MeshError::Geometry(format!(
                    "boundary edge ({v}, {w}) has an inward-pointing normal"
                )));
            }
            edges.push(BoundaryEdge {
                cell,
                endpoints: [v, w],
                theta_range: (theta, theta_end),
                outward_normal,
                length,
            });
            theta = theta_end;
            v = w;
            if v == start {
                break;
            }
            if edges.len() > next.len() {
                return Err(MeshError::Topology("boundary walk does not close".into()));
            }
        }
        if edges.len() != next.len() {
            return Err(MeshError::Topology(format!(
                "boundary has more than one loop ({} of {} boundary edges reached from the first loop)",
                edges.len(),
                next.len()
            )));
        }
        Ok(edges)
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn interior_edges(&self) -> &[InteriorEdge] {
        &self.interior_edges
    }

    /// Boundary edges in counterclockwise loop order, starting at the
    /// boundary vertex with the smallest polar angle.
    pub fn boundary_loop(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        self.interior_edges.len() + self.boundary_edges.len()
    }

    pub fn n_boundary_vertices(&self) -> usize {
        self.boundary_edges.len()
    }

    /// Corner coordinates of triangle `cell`.
    pub fn cell_corners(&self, cell: usize) -> [[f64; 2]; 3] {
        self.triangles[cell].map(|v| self.vertices[v])
    }

    pub fn triangle_area(&self, cell: usize) -> f64 {
        let [a, b, c] = self.cell_corners(cell);
        signed_area(a, b, c)
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|c| self.triangle_area(c)).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.n_edges() as i64 + self.triangles.len() as i64
    }
}

/// Ring-based graded mesh of the unit disc.
///
/// The outer ring has `n_boundary` vertices at angles `2 pi k / n_boundary`.
/// Target cell size grows linearly from `2 pi / n_boundary` at the boundary to
/// `2 pi / (n_boundary * refinement_ratio)` at the origin. Consecutive rings are
/// stitched with a zipper that picks the Delaunay diagonal of each quad, and the
/// innermost ring is closed with a fan around the centre vertex.
pub fn generate_disc_mesh(n_boundary: usize, refinement_ratio: f64) -> Result<Mesh, MeshError> {
    if n_boundary < 8 {
        return Err(MeshError::InvalidParameters(format!(
            "n_boundary must be at least 8, got {n_boundary}"
        )));
    }
    if !(refinement_ratio > 0.0 && refinement_ratio <= 1.0) {
        return Err(MeshError::InvalidParameters(format!(
            "refinement_ratio must lie in (0, 1], got {refinement_ratio}"
        )));
    }
    let h_boundary = 2.0 * PI / n_boundary as f64;
    let h_centre = h_boundary / refinement_ratio;
    let size_at = |r: f64| h_centre + (h_boundary - h_centre) * r;

    let mut vertices: Vec<[f64; 2]> = Vec::new();
    let mut rings: Vec<Vec<usize>> = Vec::new();

    let push_ring = |vertices: &mut Vec<[f64; 2]>, radius: f64, count: usize, offset: f64| {
        let ring: Vec<usize> = (0..count)
            .map(|k| {
                let id = vertices.len();
                if radius == 1.0 && offset == 0.0 {
                    let a = 2.0 * PI * k as f64 / count as f64;
                    vertices.push([a.cos(), a.sin()]);
                } else {
                    let a = offset + 2.0 * PI * k as f64 / count as f64;
                    vertices.push([radius * a.cos(), radius * a.sin()]);
                }
                id
            })
            .collect();
        ring
    };

    rings.push(push_ring(&mut vertices, 1.0, n_boundary, 0.0));
    let mut radius = 1.0;
    let mut offset = 0.0;
    let mut count = n_boundary;
    loop {
        let next_radius = radius - size_at(radius) * 3f64.sqrt() / 2.0;
        if next_radius <= 0.0 {
            break;
        }
        let next_count = (2.0 * PI * next_radius / size_at(next_radius)).round() as usize;
        if next_count < 6 {
            break;
        }
        let next_count = next_count.min(count);
        // Stagger the new ring by half its own angular spacing.
        offset += PI / next_count as f64;
        rings.push(push_ring(&mut vertices, next_radius, next_count, offset));
        radius = next_radius;
        count = next_count;
    }
    let centre = vertices.len();
    vertices.push([0.0, 0.0]);

    let mut triangles = Vec::new();
    for pair in rings.windows(2) {
        stitch_rings(&vertices, &pair[0], &pair[1], &mut triangles);
    }
    let inner = rings.last().unwrap();
    for k in 0..inner.len() {
        triangles.push([centre, inner[k], inner[(k + 1) % inner.len()]]);
    }
    Mesh::from_parts(vertices, triangles)
}

/// `true` when `d` lies strictly inside the circumcircle of the
/// counterclockwise triangle `(a, b, c)`.
fn in_circumcircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let rows = [a, b, c].map(|p| {
        let dx = p[0] - d[0];
        let dy = p[1] - d[1];
        [dx, dy, dx * dx + dy * dy]
    });
    let det = rows[0][0] * (rows[1][1] * rows[2][2] - rows[2][1] * rows[1][2])
        - rows[1][0] * (rows[0][1] * rows[2][2] - rows[2][1] * rows[0][2])
        + rows[2][0] * (rows[0][1] * rows[1][2] - rows[1][1] * rows[0][2]);
    det > 0.0
}

fn stitch_rings(vertices: &[[f64; 2]], outer: &[usize], inner: &[usize], out: &mut Vec<[usize; 3]>) {
    let (no, ni) = (outer.len(), inner.len());
    let a0 = angle_of(vertices[outer[0]]);
    // Inner vertex angularly closest to the first outer vertex.
    let j0 = (0..ni)
        .min_by(|&x, &y| {
            let dx = angular_gap(angle_of(vertices[inner[x]]), a0);
            let dy = angular_gap(angle_of(vertices[inner[y]]), a0);
            dx.total_cmp(&dy)
        })
        .unwrap();
    let (mut i, mut j) = (0usize, 0usize);
    while i < no || j < ni {
        let a = outer[i % no];
        let a_next = outer[(i + 1) % no];
        let b = inner[(j0 + j) % ni];
        let b_next = inner[(j0 + j + 1) % ni];
        let advance_outer = if i == no {
            false
        } else if j == ni {
            true
        } else {
            let pa = vertices[a];
            let pan = vertices[a_next];
            let pb = vertices[b];
            let pbn = vertices[b_next];
            let outer_ok = signed_area(pa, pan, pb) > 0.0;
            let inner_ok = signed_area(pa, pbn, pb) > 0.0;
            match (outer_ok, inner_ok) {
                (true, false) => true,
                (false, true) => false,
                _ => !in_circumcircle(pa, pan, pb, pbn),
            }
        };
        if advance_outer {
            out.push([a, a_next, b]);
            i += 1;
        } else {
            out.push([a, b_next, b]);
            j += 1;
        }
    }
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Reads an ASCII gmsh MSH 2.2 file. Only 3-node triangles (element type 2)
/// are used; all other element types and all tags are ignored. Clockwise
/// triangles are reoriented, unreferenced nodes dropped, and boundary
/// vertices within [`BOUNDARY_PROJECTION_TOL`] of the unit circle projected
/// onto it.
pub fn read_msh(path: impl AsRef<Path>) -> Result<Mesh, MeshError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_msh(&text)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next_nonempty(&mut self) -> Option<&'a str> {
        for (n, l) in self.inner.by_ref() {
            let l = l.trim();
            if !l.is_empty() {
                self.line = n + 1;
                return Some(l);
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<&'a str, MeshError> {
        let line = self.line;
        self.next_nonempty().ok_or_else(|| MeshError::Parse {
            line,
            message: format!("unexpected end of file, expected {what}"),
        })
    }

    fn err(&self, message: impl Into<String>) -> MeshError {
        MeshError::Parse {
            line: self.line,
            message: message.into(),
        }
    }
}

fn parse_field<T: std::str::FromStr>(lines: &Lines, tok: Option<&str>, what: &str) -> Result<T, MeshError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| lines.err(format!("invalid or missing {what}")))
}

/// Parses MSH 2.2 text; see [`read_msh`].
pub fn parse_msh(text: &str) -> Result<Mesh, MeshError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let mut saw_format = false;
    let mut nodes: Option<Vec<(usize, [f64; 2])>> = None;
    let mut elements: Vec<[usize; 3]> = Vec::new();
    let mut saw_elements = false;

    while let Some(header) = lines.next_nonempty() {
        match header {
            "$MeshFormat" => {
                let fmt = lines.expect("format line")?;
                let mut toks = fmt.split_whitespace();
                let version = toks.next().unwrap_or("");
                let file_type: i32 = parse_field(&lines, toks.next(), "file type")?;
                if !version.starts_with("2.2") {
                    return Err(lines.err(format!("unsupported MSH version {version}, expected 2.2")));
                }
                if file_type != 0 {
                    return Err(lines.err("binary MSH files are not supported"));
                }
                if lines.expect("$EndMeshFormat")? != "$EndMeshFormat" {
                    return Err(lines.err("expected $EndMeshFormat"));
                }
                saw_format = true;
            }
            "$Nodes" => {
                let count = lines.expect("node count")?;
                let n: usize = parse_field(&lines, Some(count), "node count")?;
                let mut list = Vec::with_capacity(n);
                for _ in 0..n {
                    let l = lines.expect("node line")?;
                    let mut toks = l.split_whitespace();
                    let id: usize = parse_field(&lines, toks.next(), "node id")?;
                    let x: f64 = parse_field(&lines, toks.next(), "x coordinate")?;
                    let y: f64 = parse_field(&lines, toks.next(), "y coordinate")?;
                    list.push((id, [x, y]));
                }
                if lines.expect("$EndNodes")? != "$EndNodes" {
                    return Err(lines.err("expected $EndNodes"));
                }
                nodes = Some(list);
            }
            "$Elements" => {
                let count = lines.expect("element count")?;
                let n: usize = parse_field(&lines, Some(count), "element count")?;
                for _ in 0..n {
                    let l = lines.expect("element line")?;
                    let toks: Vec<&str> = l.split_whitespace().collect();
                    let elem_type: usize = parse_field(&lines, toks.get(1).copied(), "element type")?;
                    let n_tags: usize = parse_field(&lines, toks.get(2).copied(), "tag count")?;
                    if elem_type != 2 {
                        continue;
                    }
                    let mut tri = [0usize; 3];
                    for (k, slot) in tri.iter_mut().enumerate() {
                        *slot = parse_field(&lines, toks.get(3 + n_tags + k).copied(), "triangle node")?;
                    }
                    elements.push(tri);
                }
                if lines.expect("$EndElements")? != "$EndElements" {
                    return Err(lines.err("expected $EndElements"));
                }
                saw_elements = true;
            }
            other if other.starts_with('$') && !other.starts_with("$End") => {
                let end = format!("$End{}", &other[1..]);
                loop {
                    if lines.expect(&end)? == end {
                        break;
                    }
                }
            }
            other => return Err(lines.err(format!("unexpected line `{other}` outside a section"))),
        }
    }
    if !saw_format {
        return Err(MeshError::Parse {
            line: lines.line,
            message: "missing $MeshFormat section".into(),
        });
    }
    let nodes = nodes.ok_or_else(|| MeshError::Parse {
        line: lines.line,
        message: "missing $Nodes section".into(),
    })?;
    if !saw_elements {
        return Err(MeshError::Parse {
            line: lines.line,
            message: "missing $Elements section".into(),
        });
    }
    build_from_file_data(nodes, elements)
}

fn build_from_file_data(nodes: Vec<(usize, [f64; 2])>, elements: Vec<[usize; 3]>) -> Result<Mesh, MeshError> {
    let by_id: HashMap<usize, usize> = nodes.iter().enumerate().map(|(k, (id, _))| (*id, k)).collect();
    let mut compact: HashMap<usize, usize> = HashMap::new();
    let mut vertices: Vec<[f64; 2]> = Vec::new();
    let mut ids: Vec<usize> = Vec::new();
    let mut triangles = Vec::with_capacity(elements.len());
    for tri in &elements {
        let mut t = [0usize; 3];
        for (slot, node_id) in t.iter_mut().zip(tri) {
            let &k = by_id
                .get(node_id)
                .ok_or_else(|| MeshError::Topology(format!("element references unknown node {node_id}")))?;
            *slot = *compact.entry(k).or_insert_with(|| {
                vertices.push(nodes[k].1);
                ids.push(*node_id);
                vertices.len() - 1
            });
        }
        let area = signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
        if area < 0.0 {
            t.swap(1, 2);
        } else if area == 0.0 {
            return Err(MeshError::Geometry(format!(
                "triangle with nodes {:?} is degenerate",
                tri
            )));
        }
        triangles.push(t);
    }

    // Project near-circle boundary vertices onto the circle.
    let incidence = edge_incidence(&triangles)?;
    let mut boundary: Vec<usize> = incidence
        .iter()
        .filter(|(_, cells)| cells.len() == 1)
        .flat_map(|(&(a, b), _)| [a, b])
        .collect();
    boundary.sort_unstable();
    boundary.dedup();
    for v in boundary {
        let p = vertices[v];
        let r = p[0].hypot(p[1]);
        if (r - 1.0).abs() > BOUNDARY_PROJECTION_TOL {
            return Err(MeshError::Geometry(format!(
                "boundary node {} at ({}, {}) is off the unit circle (radius {r})",
                ids[v], p[0], p[1]
            )));
        }
        vertices[v] = [p[0] / r, p[1] / r];
    }
    Mesh::from_parts(vertices, triangles)
}

/// Serializes a mesh as ASCII MSH 2.2: nodes, the boundary loop as line
/// elements (type 1) and the triangles (type 2).
pub fn msh_string(mesh: &Mesh) -> String {
    let mut s = String::new();
    s.push_str("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n");
    let _ = writeln!(s, "{}", mesh.n_vertices());
    for (k, p) in mesh.vertices().iter().enumerate() {
        let _ = writeln!(s, "{} {:.17e} {:.17e} 0", k + 1, p[0], p[1]);
    }
    s.push_str("$EndNodes\n$Elements\n");
    let _ = writeln!(s, "{}", mesh.n_boundary_vertices() + mesh.n_triangles());
    let mut id = 1;
    for e in mesh.boundary_loop() {
        let _ = writeln!(s, "{id} 1 2 1 1 {} {}", e.endpoints[0] + 1, e.endpoints[1] + 1);
        id += 1;
    }
    for t in mesh.triangles() {
        let _ = writeln!(s, "{id} 2 2 2 1 {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        id += 1;
    }
    s.push_str("$EndElements\n");
    s
}

pub fn write_msh(mesh: &Mesh, path: impl AsRef<Path>) -> std::io::Result<()> {
    std::fs::write(path, msh_string(mesh))
}
