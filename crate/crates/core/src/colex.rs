//! 3-colexes: 4-valent closed complexes with 4-colorable 3-cells.
//!
//! The canonical generator builds the periodic bitruncated cubic honeycomb.
//! Its 3-cells are truncated octahedra centred on the two interpenetrating
//! cubic sublattices of a BCC lattice; cells are colored by sublattice and by
//! the parity of their lattice coordinates, which is consistent on the torus
//! only for even `L`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::color::{Color, ColorPair};
use crate::complex::{CellComplex, Violation};
use crate::error::{Error, Result};

/// Integer embedding kept from generation. Coordinates are in units where
/// the cubic lattice constant is 4 and the torus period is `4L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Geometry {
    pub period: i64,
    pub vertex_positions: Vec<[i64; 3]>,
    pub cell_centers: Vec<[i64; 3]>,
}

impl Geometry {
    /// Shortest periodic displacement from `a` to `b`.
    pub fn displacement(&self, a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
        let p = self.period;
        let mut d = [0; 3];
        for k in 0..3 {
            let mut x = (b[k] - a[k]).rem_euclid(p);
            if x > p / 2 {
                x -= p;
            }
            d[k] = x;
        }
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colex {
    complex: CellComplex,
    cell_colors: Vec<Color>,
    geometry: Option<Geometry>,
}

/// Outcome of [`validate_colex`]; empty means every invariant holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Colex {
    /// Pairs a complex with a 3-cell coloring. No checks are made here; see
    /// [`validate_colex`].
    pub fn new(complex: CellComplex, cell_colors: Vec<Color>) -> Self {
        Self {
            complex,
            cell_colors,
            geometry: None,
        }
    }

    pub fn with_geometry(mut self, geometry: Geometry) -> Self {
        self.geometry = Some(geometry);
        self
    }

    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    pub fn cell_colors(&self) -> &[Color] {
        &self.cell_colors
    }

    pub fn cell_color(&self, c: usize) -> Color {
        self.cell_colors[c]
    }

    pub fn set_cell_color(&mut self, c: usize, color: Color) {
        self.cell_colors[c] = color;
    }

    /// Number of qubits, i.e. vertices.
    pub fn num_qubits(&self) -> usize {
        self.complex.num_vertices()
    }

    /// An edge is colored by the one color missing among its three 3-cells.
    pub fn edge_color(&self, e: usize) -> Option<Color> {
        let cells = self.complex.edge_cells(e);
        if cells.len() != 3 {
            return None;
        }
        let mut present = [false; 4];
        for c in cells {
            present[self.cell_colors.get(c)?.index()] = true;
        }
        let missing: Vec<usize> = (0..4).filter(|&i| !present[i]).collect();
        match missing.as_slice() {
            [i] => Color::from_index(*i),
            _ => None,
        }
    }

    /// A face adjacent to `c`- and `c'`-cells is colored `cc'`.
    pub fn face_color(&self, f: usize) -> Option<ColorPair> {
        match self.complex.face_cells(f) {
            [a, b] => ColorPair::new(*self.cell_colors.get(*a)?, *self.cell_colors.get(*b)?),
            _ => None,
        }
    }

    /// `ν_c`: number of 3-cells of each color.
    pub fn cells_per_color(&self) -> [usize; 4] {
        let mut n = [0; 4];
        for c in &self.cell_colors {
            n[c.index()] += 1;
        }
        n
    }

    /// `f_{cc'}`: number of faces of each color pair, indexed like [`ColorPair::ALL`].
    pub fn faces_per_pair(&self) -> [usize; 6] {
        let mut n = [0; 6];
        for f in 0..self.complex.num_faces() {
            if let Some(p) = self.face_color(f) {
                n[p.index()] += 1;
            }
        }
        n
    }
}

/// Checks every 3-colex invariant and lists the violations.
pub fn validate_colex(colex: &Colex) -> ValidationReport {
    let cx = &colex.complex;
    let mut violations = cx.validate();
    if colex.cell_colors.len() != cx.num_cells() {
        violations.push(Violation::ColoringLength {
            expected: cx.num_cells(),
            found: colex.cell_colors.len(),
        });
        return ValidationReport { violations };
    }
    for v in 0..cx.num_vertices() {
        let degree = cx.vertex_edges(v).len();
        if degree != 4 {
            violations.push(Violation::VertexDegree { vertex: v, degree });
        }
    }
    for f in 0..cx.num_faces() {
        if let [a, b] = *cx.face_cells(f) {
            if a != b && colex.cell_colors[a] == colex.cell_colors[b] {
                violations.push(Violation::AdjacentSameColor { face: f, cells: [a, b] });
            }
        }
    }
    for v in 0..cx.num_vertices() {
        let mut present = [false; 4];
        for c in cx.vertex_cells(v) {
            present[colex.cell_colors[c].index()] = true;
        }
        if present.iter().any(|&p| !p) {
            violations.push(Violation::VertexMissingColor { vertex: v });
        }
    }
    if cx.num_edges() != 2 * cx.num_vertices() {
        violations.push(Violation::EdgeCount {
            edges: cx.num_edges(),
            vertices: cx.num_vertices(),
        });
    }
    ValidationReport { violations }
}

/// Vertex offsets of a truncated octahedron: all permutations of (0, ±1, ±2).
fn truncated_octahedron_offsets() -> Vec<[i64; 3]> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(24);
    for p in perms {
        for sy in [1, -1] {
            for sz in [1, -1] {
                let base = [0i64, sy, 2 * sz];
                let mut v = [0; 3];
                for k in 0..3 {
                    v[p[k]] = base[k];
                }
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Outward directions of the 14 faces: 6 squares then 8 hexagons.
fn face_directions() -> Vec<[i64; 3]> {
    let mut dirs = Vec::with_capacity(14);
    for k in 0..3 {
        for s in [2, -2] {
            let mut d = [0; 3];
            d[k] = s;
            dirs.push(d);
        }
    }
    for x in [1, -1] {
        for y in [1, -1] {
            for z in [1, -1] {
                dirs.push([x, y, z]);
            }
        }
    }
    dirs
}

fn wrap(v: [i64; 3], p: i64) -> [i64; 3] {
    v.map(|x| x.rem_euclid(p))
}

fn add(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn dot(a: [i64; 3], b: [i64; 3]) -> i64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Periodic `L×L×L` bitruncated cubic honeycomb with `2L³` truncated
/// octahedra, `12L³` vertices and `24L³` edges.
pub fn build_bcc_colex(l: usize) -> Result<Colex> {
    if l == 0 || l % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "lattice size must be a positive even integer, got {l}"
        )));
    }
    let li = l as i64;
    let period = 4 * li;
    let offsets = truncated_octahedron_offsets();
    let directions = face_directions();

    let mut centers = Vec::with_capacity(2 * l * l * l);
    let mut colors = Vec::with_capacity(2 * l * l * l);
    for i in 0..li {
        for j in 0..li {
            for k in 0..li {
                let parity = (i + j + k) % 2 == 1;
                centers.push([4 * i, 4 * j, 4 * k]);
                colors.push(if parity { Color::G } else { Color::R });
                centers.push([4 * i + 2, 4 * j + 2, 4 * k + 2]);
                colors.push(if parity { Color::Y } else { Color::B });
            }
        }
    }

    let mut vertex_ids: HashMap<[i64; 3], usize> = HashMap::new();
    let mut vertex_positions = Vec::new();
    // edge key: doubled midpoint modulo the doubled period
    let mut edge_ids: HashMap<[i64; 3], usize> = HashMap::new();
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let mut face_ids: HashMap<[i64; 3], usize> = HashMap::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::with_capacity(centers.len());

    for &center in &centers {
        let verts: Vec<usize> = offsets
            .iter()
            .map(|&o| {
                let pos = wrap(add(center, o), period);
                *vertex_ids.entry(pos).or_insert_with(|| {
                    vertex_positions.push(pos);
                    vertex_positions.len() - 1
                })
            })
            .collect();

        // cell edges: vertex pairs at squared distance 2
        let mut local_edges: Vec<(usize, usize, usize)> = Vec::with_capacity(36);
        for a in 0..offsets.len() {
            for b in a + 1..offsets.len() {
                let d = [
                    offsets[a][0] - offsets[b][0],
                    offsets[a][1] - offsets[b][1],
                    offsets[a][2] - offsets[b][2],
                ];
                if dot(d, d) != 2 {
                    continue;
                }
                let mid = add(add(center, offsets[a]), add(center, offsets[b]));
                let key = wrap(mid, 2 * period);
                let id = *edge_ids.entry(key).or_insert_with(|| {
                    edges.push([verts[a], verts[b]]);
                    edges.len() - 1
                });
                local_edges.push((a, b, id));
            }
        }

        let mut cell_faces = Vec::with_capacity(14);
        for &dir in &directions {
            let key = wrap(add(center, dir), period);
            let id = match face_ids.get(&key) {
                Some(&id) => id,
                None => {
                    let best = offsets.iter().map(|&o| dot(o, dir)).max().unwrap();
                    let on_face: Vec<bool> = offsets.iter().map(|&o| dot(o, dir) == best).collect();
                    let boundary: Vec<(usize, usize, usize)> = local_edges
                        .iter()
                        .copied()
                        .filter(|&(a, b, _)| on_face[a] && on_face[b])
                        .collect();
                    faces.push(order_cycle(&boundary));
                    face_ids.insert(key, faces.len() - 1);
                    faces.len() - 1
                }
            };
            cell_faces.push(id);
        }
        cells.push(cell_faces);
    }

    let complex = CellComplex::new(vertex_positions.len(), edges, faces, cells);
    let geometry = Geometry {
        period,
        vertex_positions,
        cell_centers: centers,
    };
    Ok(Colex::new(complex, colors).with_geometry(geometry))
}

/// Orders polygon edges `(a, b, id)` (local vertex labels) into a walk.
fn order_cycle(edges: &[(usize, usize, usize)]) -> Vec<usize> {
    let mut remaining: Vec<(usize, usize, usize)> = edges.to_vec();
    let Some(first) = remaining.first().copied() else {
        return Vec::new();
    };
    remaining.remove(0);
    let mut out = vec![first.2];
    let mut at = first.1;
    while let Some(pos) = remaining.iter().position(|&(a, b, _)| a == at || b == at) {
        let (a, b, id) = remaining.remove(pos);
        out.push(id);
        at = if a == at { b } else { a };
    }
    out.extend(remaining.into_iter().map(|(_, _, id)| id));
    out
}

impl CellComplex {
    /// Copy of the complex with edge `e` deleted and later edge ids shifted
    /// down. Faces drop the edge from their lists. Intended for fault
    /// injection in tests.
    pub fn without_edge(&self, e: usize) -> CellComplex {
        let remap = |x: usize| if x > e { x - 1 } else { x };
        let edges = self
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e)
            .map(|(_, &ends)| ends)
            .collect();
        let faces = self
            .faces()
            .iter()
            .map(|es| es.iter().filter(|&&x| x != e).map(|&x| remap(x)).collect())
            .collect();
        CellComplex::new(self.num_vertices(), edges, faces, self.cells().to_vec())
    }
}
