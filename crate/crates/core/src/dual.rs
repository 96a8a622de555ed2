//! The colored dual of a 3-colex.
//!
//! In the dual, qubits are tetrahedra. Every tetrahedron has one vertex of
//! each color, one face of each color (the face opposite the vertex of that
//! color) and one edge of each color pair.

use crate::colex::{validate_colex, Colex};
use crate::color::{Color, ColorPair};
use crate::complex::{CellComplex, Violation};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DualComplex {
    complex: CellComplex,
    vertex_color: Vec<Color>,
    edge_color: Vec<ColorPair>,
    face_color: Vec<Color>,
    // per tetrahedron, indexed by Color::index
    tet_vertices: Vec<[usize; 4]>,
    tet_faces: Vec<[usize; 4]>,
    // per tetrahedron, indexed by ColorPair::index of the edge color
    tet_edges: Vec<[usize; 6]>,
    edge_qubits: Vec<Vec<usize>>,
    vertex_qubits: Vec<Vec<usize>>,
}

/// Builds the dual of a valid colex. Cell ids are shared with the primal:
/// dual `i`-cell `k` is primal `(3−i)`-cell `k`.
pub fn dual(colex: &Colex) -> Result<DualComplex> {
    let report = validate_colex(colex);
    if let Some(first) = report.violations.first() {
        return Err(Error::InvalidColex(report.violations.len(), first.to_string()));
    }
    let primal = colex.complex();
    let complex = primal.dual();
    let vertex_color = colex.cell_colors().to_vec();
    let edge_color: Vec<ColorPair> = (0..primal.num_faces())
        .map(|f| colex.face_color(f).expect("validated colex has colored faces"))
        .collect();
    let face_color: Vec<Color> = (0..primal.num_edges())
        .map(|e| colex.edge_color(e).expect("validated colex has colored edges"))
        .collect();

    let n = complex.num_cells();
    let mut tet_vertices = vec![[usize::MAX; 4]; n];
    let mut tet_faces = vec![[usize::MAX; 4]; n];
    let mut tet_edges = vec![[usize::MAX; 6]; n];
    for q in 0..n {
        for v in complex.cell_vertices(q) {
            tet_vertices[q][vertex_color[v].index()] = v;
        }
        for &f in complex.cell_faces(q) {
            tet_faces[q][face_color[f].index()] = f;
        }
        for e in complex.cell_edges(q) {
            tet_edges[q][edge_color[e].index()] = e;
        }
    }
    let edge_qubits = (0..complex.num_edges()).map(|e| complex.edge_cells(e)).collect();
    let vertex_qubits = (0..complex.num_vertices()).map(|v| complex.vertex_cells(v)).collect();

    let out = DualComplex {
        complex,
        vertex_color,
        edge_color,
        face_color,
        tet_vertices,
        tet_faces,
        tet_edges,
        edge_qubits,
        vertex_qubits,
    };
    let problems = out.validate();
    if let Some(first) = problems.first() {
        return Err(Error::InvalidColex(problems.len(), first.to_string()));
    }
    Ok(out)
}

impl DualComplex {
    pub fn complex(&self) -> &CellComplex {
        &self.complex
    }

    /// Qubit count: number of tetrahedra.
    pub fn num_qubits(&self) -> usize {
        self.complex.num_cells()
    }

    pub fn num_vertices(&self) -> usize {
        self.complex.num_vertices()
    }

    pub fn num_edges(&self) -> usize {
        self.complex.num_edges()
    }

    pub fn num_faces(&self) -> usize {
        self.complex.num_faces()
    }

    pub fn vertex_color(&self, v: usize) -> Color {
        self.vertex_color[v]
    }

    pub fn edge_color(&self, e: usize) -> ColorPair {
        self.edge_color[e]
    }

    pub fn face_color(&self, f: usize) -> Color {
        self.face_color[f]
    }

    /// The `c`-vertex of tetrahedron `q`.
    pub fn qubit_vertex(&self, q: usize, c: Color) -> usize {
        self.tet_vertices[q][c.index()]
    }

    /// The unique `c`-face of tetrahedron `q`.
    pub fn qubit_face(&self, q: usize, c: Color) -> usize {
        self.tet_faces[q][c.index()]
    }

    /// The unique edge of tetrahedron `q` whose endpoints are colored `pair`.
    pub fn qubit_edge(&self, q: usize, pair: ColorPair) -> usize {
        self.tet_edges[q][pair.index()]
    }

    pub fn qubit_vertices(&self, q: usize) -> [usize; 4] {
        self.tet_vertices[q]
    }

    pub fn qubit_faces(&self, q: usize) -> [usize; 4] {
        self.tet_faces[q]
    }

    pub fn qubit_edges(&self, q: usize) -> [usize; 6] {
        self.tet_edges[q]
    }

    /// Tetrahedra containing edge `e`, sorted.
    pub fn edge_qubits(&self, e: usize) -> &[usize] {
        &self.edge_qubits[e]
    }

    /// Tetrahedra containing vertex `v`, sorted.
    pub fn vertex_qubits(&self, v: usize) -> &[usize] {
        &self.vertex_qubits[v]
    }

    pub fn vertices_of_color(&self, c: Color) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_vertices()).filter(move |&v| self.vertex_color[v] == c)
    }

    pub fn edges_of_color(&self, p: ColorPair) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_edges()).filter(move |&e| self.edge_color[e] == p)
    }

    pub fn faces_of_color(&self, c: Color) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_faces()).filter(move |&f| self.face_color[f] == c)
    }

    /// Checks that every 3-cell is a tetrahedron with four distinct vertex
    /// colors and four distinct face colors, and that edge colors agree with
    /// endpoint colors.
    pub fn validate(&self) -> Vec<Violation> {
        let cx = &self.complex;
        let mut out = cx.validate();
        for q in 0..cx.num_cells() {
            let verts = cx.cell_vertices(q);
            let edges = cx.cell_edges(q);
            if cx.cell_faces(q).len() != 4 || edges.len() != 6 || verts.len() != 4 {
                out.push(Violation::DualCellNotTetrahedron { cell: q });
                continue;
            }
            let mut vcol: Vec<Color> = verts.iter().map(|&v| self.vertex_color[v]).collect();
            vcol.sort();
            vcol.dedup();
            let mut fcol: Vec<Color> = cx.cell_faces(q).iter().map(|&f| self.face_color[f]).collect();
            fcol.sort();
            fcol.dedup();
            let faces_opposite = Color::ALL.iter().all(|&c| {
                let f = self.tet_faces[q][c.index()];
                f != usize::MAX && !cx.face_vertices(f).contains(&self.tet_vertices[q][c.index()])
            });
            if vcol.len() != 4 || fcol.len() != 4 || !faces_opposite {
                out.push(Violation::DualCellColors { cell: q });
            }
        }
        for e in 0..cx.num_edges() {
            let [a, b] = cx.edge_vertices(e);
            if ColorPair::new(self.vertex_color[a], self.vertex_color[b]) != Some(self.edge_color[e]) {
                out.push(Violation::AdjacentSameColor { face: e, cells: [a, b] });
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::build_bcc_colex;

    #[test]
    fn l2_dual_counts_swap() {
        let d = dual(&build_bcc_colex(2).unwrap()).unwrap();
        assert_eq!(d.complex().counts(), [16, 112, 192, 96]);
        assert!(d.validate().is_empty());
    }

    #[test]
    fn tetrahedra_have_one_face_per_color() {
        let d = dual(&build_bcc_colex(2).unwrap()).unwrap();
        for q in 0..d.num_qubits() {
            let mut colors: Vec<Color> = d.qubit_faces(q).iter().map(|&f| d.face_color(f)).collect();
            colors.sort();
            assert_eq!(colors, Color::ALL.to_vec());
            for c in Color::ALL {
                assert_eq!(d.vertex_color(d.qubit_vertex(q, c)), c);
            }
        }
    }

    #[test]
    fn dual_rejects_invalid_colex() {
        let mut colex = build_bcc_colex(2).unwrap();
        colex.set_cell_color(0, colex.cell_color(1));
        let c = colex.cell_color(0);
        // force a clash with some neighbor of cell 0
        let f = colex.complex().cell_faces(0)[0];
        let other = *colex.complex().face_cells(f).iter().find(|&&x| x != 0).unwrap();
        colex.set_cell_color(other, c);
        assert!(dual(&colex).is_err());
    }

    #[test]
    fn edge_qubit_counts_are_even() {
        let d = dual(&build_bcc_colex(2).unwrap()).unwrap();
        for e in 0..d.num_edges() {
            let n = d.edge_qubits(e).len();
            assert!(n == 4 || n == 6, "edge {e} in {n} tetrahedra");
        }
        for v in 0..d.num_vertices() {
            assert_eq!(d.vertex_qubits(v).len(), 24);
        }
    }
}
