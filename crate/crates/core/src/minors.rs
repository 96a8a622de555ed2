//! Minor complexes of the dual and the cell-level projection maps.
//!
//! Deleting every `c`-vertex of the dual leaves a complex whose faces are the
//! `c`-faces and whose 3-cells are the merged stars of the deleted vertices.
//! Deleting both `c`- and `c'`-vertices leaves only `dd'`-edges; its faces are
//! rebuilt, one per `cc'`-edge, as the cycle of `dd'`-edges of the
//! tetrahedra around that edge.
//!
//! Surviving vertices, edges and faces keep their dual ids. Faces of the
//! two-color minor are identified by the id of their generating `cc'`-edge.
//! Only the cell maps needed for errors, syndromes and stabilizers are
//! materialized: `π_c(ν)` is the `c`-face of `ν` and `π_{cc'}(ν)` is its
//! `dd'`-edge.

use serde::{Deserialize, Serialize};

use crate::color::{Color, ColorPair};
use crate::complex::CellComplex;
use crate::dual::DualComplex;
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};

/// A 3-cell of a minor complex, indexed by the deleted vertex it replaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorCell {
    pub vertex: usize,
    pub faces: Vec<usize>,
}

fn positions(len: usize, ids: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; len];
    for (i, &g) in ids.iter().enumerate() {
        pos[g] = Some(i);
    }
    pos
}

/// `Γ^{*∖c}`.
#[derive(Clone, Debug)]
pub struct MinorComplexC {
    color: Color,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    faces: Vec<usize>,
    face_edges: Vec<Vec<usize>>,
    cells: Vec<MinorCell>,
    pi_cell: Vec<usize>,
    edge_pos: Vec<Option<usize>>,
    face_pos: Vec<Option<usize>>,
}

pub fn minor_c(d: &DualComplex, c: Color) -> MinorComplexC {
    let cx = d.complex();
    let vertices: Vec<usize> = (0..d.num_vertices()).filter(|&v| d.vertex_color(v) != c).collect();
    let edges: Vec<usize> = (0..d.num_edges()).filter(|&e| !d.edge_color(e).contains(c)).collect();
    let faces: Vec<usize> = d.faces_of_color(c).collect();
    let face_edges = faces.iter().map(|&f| cx.face_edges(f).to_vec()).collect();
    let face_pos = positions(d.num_faces(), &faces);

    let cells = d
        .vertices_of_color(c)
        .map(|v| {
            let mut parity = Gf2Vector::zeros(d.num_faces());
            for &q in d.vertex_qubits(v) {
                parity.flip(d.qubit_face(q, c));
            }
            MinorCell {
                vertex: v,
                faces: parity.to_indices(),
            }
        })
        .collect();
    let pi_cell = (0..d.num_qubits()).map(|q| d.qubit_face(q, c)).collect();
    MinorComplexC {
        color: c,
        edge_pos: positions(d.num_edges(), &edges),
        vertices,
        edges,
        faces,
        face_edges,
        cells,
        pi_cell,
        face_pos,
    }
}

impl MinorComplexC {
    pub fn color(&self) -> Color {
        self.color
    }

    /// Surviving vertex ids of the dual.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Surviving edge ids of the dual.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    /// The `c`-face ids of the dual.
    pub fn faces(&self) -> &[usize] {
        &self.faces
    }

    /// Edges (dual ids) of the `i`-th face of [`faces`](Self::faces).
    pub fn face_edges(&self, i: usize) -> &[usize] {
        &self.face_edges[i]
    }

    pub fn cells(&self) -> &[MinorCell] {
        &self.cells
    }

    /// `π_c(ν)` as a dual face id.
    pub fn pi_cell(&self, qubit: usize) -> usize {
        self.pi_cell[qubit]
    }

    pub fn edge_position(&self, edge: usize) -> Option<usize> {
        self.edge_pos.get(edge).copied().flatten()
    }

    pub fn face_position(&self, face: usize) -> Option<usize> {
        self.face_pos.get(face).copied().flatten()
    }

    /// `π_c(E)` over the minor's faces (local order).
    pub fn project_error(&self, support: &Gf2Vector) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(self.faces.len());
        for q in support.iter_ones() {
            out.flip(self.face_pos[self.pi_cell[q]].expect("projected face lies in minor"));
        }
        out
    }

    /// Restriction of a dual edge vector to the minor's edges (local order).
    pub fn restrict_edges(&self, s: &Gf2Vector) -> Gf2Vector {
        s.gather(&self.edges)
    }

    /// ∂₂ of the minor: local edges × local faces.
    pub fn boundary_2(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.edges.len(), self.faces.len());
        for (i, es) in self.face_edges.iter().enumerate() {
            for &e in es {
                m.flip(self.edge_pos[e].expect("face edge lies in minor"), i);
            }
        }
        m
    }

    /// X-stabilizer generators of the toric code on the minor: one row per
    /// 3-cell, over local faces.
    pub fn cell_generators(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.cells.len(), self.faces.len());
        for (i, cell) in self.cells.iter().enumerate() {
            for &f in &cell.faces {
                m.flip(i, self.face_pos[f].expect("cell face lies in minor"));
            }
        }
        m
    }

    /// The minor with dense local ids, for validation and export.
    pub fn to_cell_complex(&self, d: &DualComplex) -> CellComplex {
        let vpos = positions(d.num_vertices(), &self.vertices);
        let edges = self
            .edges
            .iter()
            .map(|&e| d.complex().edge_vertices(e).map(|v| vpos[v].expect("endpoint survives")))
            .collect();
        let faces = self
            .face_edges
            .iter()
            .map(|es| es.iter().map(|&e| self.edge_pos[e].unwrap()).collect())
            .collect();
        let cells = self
            .cells
            .iter()
            .map(|c| c.faces.iter().map(|&f| self.face_pos[f].unwrap()).collect())
            .collect();
        CellComplex::new(self.vertices.len(), edges, faces, cells)
    }
}

/// A face of `Γ^{*∖cc'}`: generated by a `cc'`-edge, bounded by `dd'`-edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorFaceCC {
    pub generator: usize,
    pub boundary: Vec<usize>,
}

/// `Γ^{*∖cc'}`.
#[derive(Clone, Debug)]
pub struct MinorComplexCC {
    pair: ColorPair,
    vertices: Vec<usize>,
    edges: Vec<usize>,
    faces: Vec<MinorFaceCC>,
    cells: Vec<MinorCell>,
    pi_cell: Vec<usize>,
    vertex_pos: Vec<Option<usize>>,
    edge_pos: Vec<Option<usize>>,
    face_pos: Vec<Option<usize>>,
}

pub fn minor_cc(d: &DualComplex, c: Color, c2: Color) -> Result<MinorComplexCC> {
    let pair = ColorPair::new(c, c2)
        .ok_or_else(|| Error::InvalidInput(format!("minor_cc needs two distinct colors, got {c}{c2}")))?;
    Ok(minor_pair(d, pair))
}

/// [`minor_cc`] for an already-normalized pair.
pub fn minor_pair(d: &DualComplex, pair: ColorPair) -> MinorComplexCC {
    let keep = pair.complement();
    let vertices: Vec<usize> = (0..d.num_vertices())
        .filter(|&v| keep.contains(d.vertex_color(v)))
        .collect();
    let edges: Vec<usize> = d.edges_of_color(keep).collect();
    let faces: Vec<MinorFaceCC> = d
        .edges_of_color(pair)
        .map(|g| {
            let mut parity = Gf2Vector::zeros(d.num_edges());
            for &q in d.edge_qubits(g) {
                parity.flip(d.qubit_edge(q, keep));
            }
            MinorFaceCC {
                generator: g,
                boundary: parity.to_indices(),
            }
        })
        .collect();
    let generators: Vec<usize> = faces.iter().map(|f| f.generator).collect();
    let face_pos = positions(d.num_edges(), &generators);
    let cells = (0..d.num_vertices())
        .filter(|&v| pair.contains(d.vertex_color(v)))
        .map(|v| {
            let mut fs: Vec<usize> = d
                .complex()
                .vertex_edges(v)
                .iter()
                .copied()
                .filter(|&e| d.edge_color(e) == pair)
                .collect();
            fs.sort_unstable();
            MinorCell { vertex: v, faces: fs }
        })
        .collect();
    let pi_cell = (0..d.num_qubits()).map(|q| d.qubit_edge(q, keep)).collect();
    MinorComplexCC {
        pair,
        vertex_pos: positions(d.num_vertices(), &vertices),
        edge_pos: positions(d.num_edges(), &edges),
        face_pos,
        vertices,
        edges,
        faces,
        cells,
        pi_cell,
    }
}

impl MinorComplexCC {
    /// The deleted pair `cc'`.
    pub fn pair(&self) -> ColorPair {
        self.pair
    }

    /// The surviving pair `dd'`.
    pub fn complement(&self) -> ColorPair {
        self.pair.complement()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn faces(&self) -> &[MinorFaceCC] {
        &self.faces
    }

    /// 3-cells; each lists its faces by generating-edge id.
    pub fn cells(&self) -> &[MinorCell] {
        &self.cells
    }

    /// `π_{cc'}(ν)` as a dual edge id.
    pub fn pi_cell(&self, qubit: usize) -> usize {
        self.pi_cell[qubit]
    }

    pub fn vertex_position(&self, v: usize) -> Option<usize> {
        self.vertex_pos.get(v).copied().flatten()
    }

    pub fn edge_position(&self, e: usize) -> Option<usize> {
        self.edge_pos.get(e).copied().flatten()
    }

    /// Position of the face generated by `cc'`-edge `generator`.
    pub fn face_position(&self, generator: usize) -> Option<usize> {
        self.face_pos.get(generator).copied().flatten()
    }

    /// `π_{cc'}(E)` over the minor's edges (local order).
    pub fn project_error(&self, support: &Gf2Vector) -> Gf2Vector {
        let mut out = Gf2Vector::zeros(self.edges.len());
        for q in support.iter_ones() {
            out.flip(self.edge_pos[self.pi_cell[q]].expect("projected edge lies in minor"));
        }
        out
    }

    /// Restriction of a dual vertex vector to the minor's vertices.
    pub fn restrict_vertices(&self, s: &Gf2Vector) -> Gf2Vector {
        s.gather(&self.vertices)
    }

    /// ∂₁ of the minor: local vertices × local edges.
    pub fn boundary_1(&self, d: &DualComplex) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.vertices.len(), self.edges.len());
        for (i, &e) in self.edges.iter().enumerate() {
            for v in d.complex().edge_vertices(e) {
                m.flip(self.vertex_pos[v].expect("endpoint survives"), i);
            }
        }
        m
    }

    /// ∂₂ of the minor: local edges × local faces. Its columns are the
    /// Z-stabilizer generators of the toric code on the minor.
    pub fn boundary_2(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.edges.len(), self.faces.len());
        for (i, f) in self.faces.iter().enumerate() {
            for &e in &f.boundary {
                m.flip(self.edge_pos[e].expect("boundary edge lies in minor"), i);
            }
        }
        m
    }

    /// The minor with dense local ids, for validation and export.
    pub fn to_cell_complex(&self, d: &DualComplex) -> CellComplex {
        let edges = self
            .edges
            .iter()
            .map(|&e| d.complex().edge_vertices(e).map(|v| self.vertex_pos[v].unwrap()))
            .collect();
        let faces = self
            .faces
            .iter()
            .map(|f| order_walk(d, &f.boundary).into_iter().map(|e| self.edge_pos[e].unwrap()).collect())
            .collect();
        let cells = self
            .cells
            .iter()
            .map(|c| c.faces.iter().map(|&g| self.face_pos[g].unwrap()).collect())
            .collect();
        CellComplex::new(self.vertices.len(), edges, faces, cells)
    }
}

/// Orders a set of edges that forms a cycle into a walk.
fn order_walk(d: &DualComplex, edges: &[usize]) -> Vec<usize> {
    let mut rest: Vec<usize> = edges.to_vec();
    if rest.is_empty() {
        return rest;
    }
    let first = rest.remove(0);
    let mut out = vec![first];
    let mut at = d.complex().edge_vertices(first)[1];
    while let Some(pos) = rest.iter().position(|&e| d.complex().edge_vertices(e).contains(&at)) {
        let e = rest.remove(pos);
        let [a, b] = d.complex().edge_vertices(e);
        at = if a == at { b } else { a };
        out.push(e);
    }
    out.extend(rest);
    out
}

/// `∂Ω` over dual faces: mod-2 sum of the faces of every tetrahedron in `support`.
pub fn face_boundary(d: &DualComplex, support: &Gf2Vector) -> Result<Gf2Vector> {
    check_len(d, support)?;
    let mut out = Gf2Vector::zeros(d.num_faces());
    for q in support.iter_ones() {
        for &f in d.complex().cell_faces(q) {
            out.flip(f);
        }
    }
    Ok(out)
}

/// `δΩ` over dual edges: mod-2 sum over the six color pairs of `π_{cc'}(ν)`.
pub fn edge_boundary(d: &DualComplex, support: &Gf2Vector) -> Result<Gf2Vector> {
    check_len(d, support)?;
    let mut out = Gf2Vector::zeros(d.num_edges());
    for q in support.iter_ones() {
        for pair in ColorPair::ALL {
            out.flip(d.qubit_edge(q, pair.complement()));
        }
    }
    Ok(out)
}

fn check_len(d: &DualComplex, support: &Gf2Vector) -> Result<()> {
    if support.len() != d.num_qubits() {
        return Err(Error::SizeMismatch {
            what: "qubit support",
            expected: d.num_qubits(),
            found: support.len(),
        });
    }
    Ok(())
}
