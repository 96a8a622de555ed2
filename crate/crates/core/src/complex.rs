//! Closed 3D cell complexes stored as explicit incidence lists.
//!
//! Cells of every dimension are identified by dense integer ids. Downward
//! incidence is the stored data (edge → 2 vertices, face → cyclic edge list,
//! 3-cell → face list); upward incidence is derived on construction.
//! Orientation is not tracked since all algebra here is over GF(2).

use serde::{Deserialize, Serialize};

use crate::gf2::Gf2Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
    faces: Vec<Vec<usize>>,
    cells: Vec<Vec<usize>>,
    vertex_edges: Vec<Vec<usize>>,
    edge_faces: Vec<Vec<usize>>,
    face_cells: Vec<Vec<usize>>,
}

/// A structural defect found while validating a complex. Each variant names
/// the offending cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    IndexOutOfRange { dim: u8, cell: usize, reference: usize },
    DegenerateEdge { edge: usize },
    FaceNotCycle { face: usize },
    FaceCofaceCount { face: usize, count: usize },
    FaceSelfAdjacent { face: usize, cell: usize },
    EulerCharacteristic { value: i64 },
    VertexDegree { vertex: usize, degree: usize },
    AdjacentSameColor { face: usize, cells: [usize; 2] },
    VertexMissingColor { vertex: usize },
    EdgeCount { edges: usize, vertices: usize },
    ColoringLength { expected: usize, found: usize },
    DualCellNotTetrahedron { cell: usize },
    DualCellColors { cell: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        use Violation::*;
        match self {
            IndexOutOfRange { dim, cell, reference } => {
                write!(f, "{dim}-cell {cell} references missing cell {reference}")
            }
            DegenerateEdge { edge } => write!(f, "edge {edge} has coincident endpoints"),
            FaceNotCycle { face } => write!(f, "face {face} edges do not form a single closed cycle"),
            FaceCofaceCount { face, count } => {
                write!(f, "face {face} bounds {count} 3-cells (expected 2)")
            }
            FaceSelfAdjacent { face, cell } => {
                write!(f, "face {face} appears twice on 3-cell {cell}")
            }
            EulerCharacteristic { value } => write!(f, "Euler characteristic {value} (expected 0)"),
            VertexDegree { vertex, degree } => write!(f, "vertex {vertex} has degree {degree} (expected 4)"),
            AdjacentSameColor { face, cells } => write!(
                f,
                "3-cells {} and {} share face {face} and have the same color",
                cells[0], cells[1]
            ),
            VertexMissingColor { vertex } => {
                write!(f, "vertex {vertex} is not incident on 3-cells of all four colors")
            }
            EdgeCount { edges, vertices } => write!(f, "{edges} edges for {vertices} vertices (expected 2V)"),
            ColoringLength { expected, found } => {
                write!(f, "{found} cell colors for {expected} 3-cells")
            }
            DualCellNotTetrahedron { cell } => write!(f, "dual 3-cell {cell} is not a tetrahedron"),
            DualCellColors { cell } => {
                write!(f, "dual 3-cell {cell} does not carry four distinct vertex and face colors")
            }
        }
    }
}

impl CellComplex {
    /// Assembles a complex and derives upward incidence. Out-of-range
    /// references are dropped from the derived maps and reported by
    /// [`validate`](Self::validate).
    pub fn new(
        num_vertices: usize,
        edges: Vec<[usize; 2]>,
        faces: Vec<Vec<usize>>,
        cells: Vec<Vec<usize>>,
    ) -> Self {
        let mut vertex_edges = vec![Vec::new(); num_vertices];
        for (e, ends) in edges.iter().enumerate() {
            for &v in ends {
                if v < num_vertices && !vertex_edges[v].contains(&e) {
                    vertex_edges[v].push(e);
                }
            }
        }
        let mut edge_faces = vec![Vec::new(); edges.len()];
        for (f, es) in faces.iter().enumerate() {
            for &e in es {
                if e < edges.len() && !edge_faces[e].contains(&f) {
                    edge_faces[e].push(f);
                }
            }
        }
        let mut face_cells = vec![Vec::new(); faces.len()];
        for (c, fs) in cells.iter().enumerate() {
            for &f in fs {
                if f < faces.len() {
                    face_cells[f].push(c);
                }
            }
        }
        Self {
            num_vertices,
            edges,
            faces,
            cells,
            vertex_edges,
            edge_faces,
            face_cells,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    /// `[V, E, F, C]`.
    pub fn counts(&self) -> [usize; 4] {
        [self.num_vertices(), self.num_edges(), self.num_faces(), self.num_cells()]
    }

    pub fn euler_characteristic(&self) -> i64 {
        let [v, e, f, c] = self.counts().map(|n| n as i64);
        v - e + f - c
    }

    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        self.edges[e]
    }

    pub fn face_edges(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn cell_faces(&self, c: usize) -> &[usize] {
        &self.cells[c]
    }

    pub fn vertex_edges(&self, v: usize) -> &[usize] {
        &self.vertex_edges[v]
    }

    pub fn edge_faces(&self, e: usize) -> &[usize] {
        &self.edge_faces[e]
    }

    pub fn face_cells(&self, f: usize) -> &[usize] {
        &self.face_cells[f]
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Distinct vertices of a face, in first-seen order along its edge list.
    pub fn face_vertices(&self, f: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &e in &self.faces[f] {
            for v in self.edges[e] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Distinct edges of a 3-cell, sorted.
    pub fn cell_edges(&self, c: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.cells[c]
            .iter()
            .flat_map(|&f| self.faces[f].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Distinct vertices of a 3-cell, sorted.
    pub fn cell_vertices(&self, c: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .cell_edges(c)
            .into_iter()
            .flat_map(|e| self.edges[e])
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Distinct 3-cells containing an edge, sorted.
    pub fn edge_cells(&self, e: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.edge_faces[e]
            .iter()
            .flat_map(|&f| self.face_cells[f].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Distinct 3-cells containing a vertex, sorted.
    pub fn vertex_cells(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.vertex_edges[v]
            .iter()
            .flat_map(|&e| self.edge_cells(e))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// ∂₁: vertices × edges.
    pub fn boundary_1(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.num_vertices(), self.num_edges());
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            m.flip(a, e);
            m.flip(b, e);
        }
        m
    }

    /// ∂₂: edges × faces.
    pub fn boundary_2(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.num_edges(), self.num_faces());
        for (f, es) in self.faces.iter().enumerate() {
            for &e in es {
                m.flip(e, f);
            }
        }
        m
    }

    /// ∂₃: faces × 3-cells.
    pub fn boundary_3(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.num_faces(), self.num_cells());
        for (c, fs) in self.cells.iter().enumerate() {
            for &f in fs {
                m.flip(f, c);
            }
        }
        m
    }

    /// First Betti number over GF(2): `dim ker ∂₁ − rank ∂₂`.
    pub fn betti_1(&self) -> usize {
        let kernel = self.num_edges() - self.boundary_1().rank();
        kernel - self.boundary_2().rank()
    }

    fn is_closed_cycle(&self, edges: &[usize]) -> bool {
        if edges.is_empty() {
            return false;
        }
        // every vertex met exactly twice, and consecutive edges share a vertex
        let mut seen: Vec<(usize, usize)> = Vec::new();
        for &e in edges {
            for v in self.edges[e] {
                match seen.iter_mut().find(|(u, _)| *u == v) {
                    Some((_, n)) => *n += 1,
                    None => seen.push((v, 1)),
                }
            }
        }
        if seen.iter().any(|&(_, n)| n != 2) {
            return false;
        }
        let n = edges.len();
        if n == 1 {
            return false;
        }
        (0..n).all(|i| {
            let [a, b] = self.edges[edges[i]];
            let [c, d] = self.edges[edges[(i + 1) % n]];
            a == c || a == d || b == c || b == d
        })
    }

    /// Structural checks for a closed complex. An empty list means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            for v in [a, b] {
                if v >= self.num_vertices {
                    out.push(Violation::IndexOutOfRange { dim: 1, cell: e, reference: v });
                }
            }
            if a == b {
                out.push(Violation::DegenerateEdge { edge: e });
            }
        }
        let mut faces_ok = true;
        for (f, es) in self.faces.iter().enumerate() {
            if let Some(&bad) = es.iter().find(|&&e| e >= self.edges.len()) {
                out.push(Violation::IndexOutOfRange { dim: 2, cell: f, reference: bad });
                faces_ok = false;
                continue;
            }
            if !self.is_closed_cycle(es) {
                out.push(Violation::FaceNotCycle { face: f });
            }
        }
        for (c, fs) in self.cells.iter().enumerate() {
            if let Some(&bad) = fs.iter().find(|&&f| f >= self.faces.len()) {
                out.push(Violation::IndexOutOfRange { dim: 3, cell: c, reference: bad });
                faces_ok = false;
            }
        }
        if faces_ok {
            for (f, cs) in self.face_cells.iter().enumerate() {
                if cs.len() != 2 {
                    out.push(Violation::FaceCofaceCount { face: f, count: cs.len() });
                } else if cs[0] == cs[1] {
                    out.push(Violation::FaceSelfAdjacent { face: f, cell: cs[0] });
                }
            }
        }
        let chi = self.euler_characteristic();
        if chi != 0 {
            out.push(Violation::EulerCharacteristic { value: chi });
        }
        out
    }

    /// Faces around edge `e`, ordered so consecutive faces share a 3-cell.
    /// Falls back to id order when the neighborhood is not a simple ring.
    fn faces_around_edge(&self, e: usize) -> Vec<usize> {
        let around = &self.edge_faces[e];
        if around.len() < 3 {
            return around.clone();
        }
        let mut order = vec![around[0]];
        let mut prev_cell = None;
        while order.len() < around.len() {
            let cur = *order.last().unwrap();
            let next = self.face_cells[cur]
                .iter()
                .filter(|&&c| Some(c) != prev_cell)
                .find_map(|&c| {
                    around
                        .iter()
                        .copied()
                        .find(|&g| g != cur && !order.contains(&g) && self.face_cells[g].contains(&c))
                        .map(|g| (c, g))
                });
            match next {
                Some((c, g)) => {
                    prev_cell = Some(c);
                    order.push(g);
                }
                None => return around.clone(),
            }
        }
        order
    }

    /// Poincaré dual of a closed complex. Ids carry over across dimensions:
    /// dual vertex `i` is 3-cell `i`, dual edge `i` is face `i`, dual face `i`
    /// is edge `i`, and dual 3-cell `i` is vertex `i`.
    pub fn dual(&self) -> CellComplex {
        let edges = self
            .face_cells
            .iter()
            .map(|cs| match cs.as_slice() {
                [a, b] => [*a, *b],
                [a] => [*a, *a],
                _ => [usize::MAX, usize::MAX],
            })
            .collect();
        let faces = (0..self.num_edges()).map(|e| self.faces_around_edge(e)).collect();
        let cells = self.vertex_edges.clone();
        CellComplex::new(self.num_cells(), edges, faces, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable();
        v
    }

    #[test]
    fn bcc_l2_counts_and_euler() {
        let colex = crate::colex::build_bcc_colex(2).unwrap();
        let cx = colex.complex();
        assert_eq!(cx.counts(), [96, 192, 112, 16]);
        assert_eq!(cx.euler_characteristic(), 0);
        assert!(cx.validate().is_empty());
    }

    #[test]
    fn dual_is_an_involution_on_incidence() {
        let colex = crate::colex::build_bcc_colex(2).unwrap();
        let cx = colex.complex();
        let dd = cx.dual().dual();
        assert_eq!(dd.counts(), cx.counts());
        for e in 0..cx.num_edges() {
            assert_eq!(sorted(dd.edge_vertices(e).to_vec()), sorted(cx.edge_vertices(e).to_vec()));
        }
        for f in 0..cx.num_faces() {
            assert_eq!(sorted(dd.face_edges(f).to_vec()), sorted(cx.face_edges(f).to_vec()));
        }
        for c in 0..cx.num_cells() {
            assert_eq!(sorted(dd.cell_faces(c).to_vec()), sorted(cx.cell_faces(c).to_vec()));
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let colex = crate::colex::build_bcc_colex(2).unwrap();
        let d = colex.complex().dual();
        assert!(d.validate().is_empty());
        let d1 = d.boundary_1();
        let d2 = d.boundary_2();
        let d3 = d.boundary_3();
        assert_eq!(d1.mul(&d2).unwrap().rank(), 0);
        assert_eq!(d2.mul(&d3).unwrap().rank(), 0);
    }

    #[test]
    fn three_torus_has_betti_one_three() {
        let colex = crate::colex::build_bcc_colex(2).unwrap();
        assert_eq!(colex.complex().dual().betti_1(), 3);
        assert_eq!(colex.complex().betti_1(), 3);
    }

    #[test]
    fn open_face_is_reported() {
        // a single triangle missing an edge, no 3-cells
        let cx = CellComplex::new(3, vec![[0, 1], [1, 2], [2, 0]], vec![vec![0, 1]], vec![]);
        let report = cx.validate();
        assert!(report.contains(&Violation::FaceNotCycle { face: 0 }));
        assert!(report.contains(&Violation::FaceCofaceCount { face: 0, count: 0 }));
    }
}
