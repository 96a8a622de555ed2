//! Color-code stabilizer semantics on the dual complex.
//!
//! X-type generators sit on dual vertices (`B_v^X`, all tetrahedra around
//! `v`); Z-type generators sit on dual edges (`B_e^Z`, all tetrahedra around
//! `e`). An X error is therefore flagged on edges and a Z error on vertices.

use serde::{Deserialize, Serialize};

use crate::colex::Colex;
use crate::dual::{dual, DualComplex};
use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector, RowBasis};

/// X and Z parts of a Pauli error, as indicator vectors over qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErrorSupport {
    pub x: Gf2Vector,
    pub z: Gf2Vector,
}

impl ErrorSupport {
    pub fn identity(num_qubits: usize) -> Self {
        Self {
            x: Gf2Vector::zeros(num_qubits),
            z: Gf2Vector::zeros(num_qubits),
        }
    }

    pub fn from_indices(
        num_qubits: usize,
        x: impl IntoIterator<Item = usize>,
        z: impl IntoIterator<Item = usize>,
    ) -> Self {
        Self {
            x: Gf2Vector::from_indices(num_qubits, x),
            z: Gf2Vector::from_indices(num_qubits, z),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Product of two Paulis, ignoring phase.
    pub fn mul(&self, other: &Self) -> Self {
        Self {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        }
    }

    /// Total number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        let mut both = self.x.clone();
        for q in self.z.iter_ones() {
            both.set(q, true);
        }
        both.weight()
    }
}

/// `x`: violated `B_e^Z` (over dual edges). `z`: violated `B_v^X` (over dual vertices).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub x: Gf2Vector,
    pub z: Gf2Vector,
}

impl Syndrome {
    pub fn is_trivial(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }
}

/// Generator matrices with qubits as columns.
#[derive(Clone, Debug)]
pub struct StabilizerMatrices {
    /// One row per dual vertex (`B_v^X`).
    pub sx: Gf2Matrix,
    /// One row per dual edge (`B_e^Z`), followed by one dependent row per
    /// dual vertex (`B_ν^Z` on the matching primal 3-cell).
    pub sz: Gf2Matrix,
    pub num_edge_rows: usize,
}

pub fn syndrome_of(d: &DualComplex, e: &ErrorSupport) -> Result<Syndrome> {
    check_support(d.num_qubits(), e)?;
    let x = Gf2Vector::from_bools(
        &(0..d.num_edges())
            .map(|edge| d.edge_qubits(edge).iter().filter(|&&q| e.x.get(q)).count() % 2 == 1)
            .collect::<Vec<_>>(),
    );
    let z = Gf2Vector::from_bools(
        &(0..d.num_vertices())
            .map(|v| d.vertex_qubits(v).iter().filter(|&&q| e.z.get(q)).count() % 2 == 1)
            .collect::<Vec<_>>(),
    );
    Ok(Syndrome { x, z })
}

pub fn stabilizer_matrices(d: &DualComplex) -> StabilizerMatrices {
    let n = d.num_qubits();
    let sx = Gf2Matrix::from_supports(
        n,
        (0..d.num_vertices()).map(|v| d.vertex_qubits(v).iter().copied()),
    );
    let edge_rows = (0..d.num_edges()).map(|e| d.edge_qubits(e).to_vec());
    let cell_rows = (0..d.num_vertices()).map(|v| d.vertex_qubits(v).to_vec());
    let sz = Gf2Matrix::from_supports(n, edge_rows.chain(cell_rows));
    StabilizerMatrices {
        sx,
        sz,
        num_edge_rows: d.num_edges(),
    }
}

fn check_support(n: usize, e: &ErrorSupport) -> Result<()> {
    for len in [e.x.len(), e.z.len()] {
        if len != n {
            return Err(Error::SizeMismatch {
                what: "error support",
                expected: n,
                found: len,
            });
        }
    }
    Ok(())
}

/// How an estimate relates to the actual error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualClass {
    /// Residual is a stabilizer.
    Success,
    /// X part of the residual is a nontrivial logical operator.
    LogicalX,
    /// Z part of the residual is a nontrivial logical operator.
    LogicalZ,
    /// Both parts are nontrivial logical operators.
    LogicalXZ,
    /// The estimate does not reproduce the syndrome.
    SyndromeMismatch,
}

impl ResidualClass {
    pub fn is_logical(self) -> bool {
        matches!(self, Self::LogicalX | Self::LogicalZ | Self::LogicalXZ)
    }
}

/// A color code on a fixed dual complex with cached generator data.
#[derive(Clone, Debug)]
pub struct ColorCode {
    dual: DualComplex,
    stabilizers: StabilizerMatrices,
    x_basis: RowBasis,
    z_basis: RowBasis,
    qubit_edges: Vec<Vec<usize>>,
    qubit_vertices: Vec<Vec<usize>>,
}

impl ColorCode {
    pub fn new(colex: &Colex) -> Result<Self> {
        Ok(Self::from_dual(dual(colex)?))
    }

    pub fn from_dual(dual: DualComplex) -> Self {
        let stabilizers = stabilizer_matrices(&dual);
        let x_basis = RowBasis::new(&stabilizers.sx);
        let z_basis = RowBasis::new(&stabilizers.sz);
        let cx = dual.complex();
        let qubit_edges = (0..dual.num_qubits()).map(|q| cx.cell_edges(q)).collect();
        let qubit_vertices = (0..dual.num_qubits()).map(|q| cx.cell_vertices(q)).collect();
        Self {
            dual,
            stabilizers,
            x_basis,
            z_basis,
            qubit_edges,
            qubit_vertices,
        }
    }

    pub fn dual(&self) -> &DualComplex {
        &self.dual
    }

    pub fn num_qubits(&self) -> usize {
        self.dual.num_qubits()
    }

    pub fn stabilizers(&self) -> &StabilizerMatrices {
        &self.stabilizers
    }

    pub fn rank_x(&self) -> usize {
        self.x_basis.rank()
    }

    pub fn rank_z(&self) -> usize {
        self.z_basis.rank()
    }

    /// Number of logical qubits, `n − rank(Sx) − rank(Sz)`.
    pub fn dimension(&self) -> usize {
        self.num_qubits() - self.rank_x() - self.rank_z()
    }

    pub fn syndrome_of(&self, e: &ErrorSupport) -> Result<Syndrome> {
        check_support(self.num_qubits(), e)?;
        let mut x = Gf2Vector::zeros(self.dual.num_edges());
        for q in e.x.iter_ones() {
            for &edge in &self.qubit_edges[q] {
                x.flip(edge);
            }
        }
        let mut z = Gf2Vector::zeros(self.dual.num_vertices());
        for q in e.z.iter_ones() {
            for &v in &self.qubit_vertices[q] {
                z.flip(v);
            }
        }
        Ok(Syndrome { x, z })
    }

    pub fn is_x_stabilizer(&self, support: &Gf2Vector) -> Result<bool> {
        self.x_basis.contains(support)
    }

    pub fn is_z_stabilizer(&self, support: &Gf2Vector) -> Result<bool> {
        self.z_basis.contains(support)
    }

    pub fn residual_class(&self, actual: &ErrorSupport, estimate: &ErrorSupport) -> Result<ResidualClass> {
        check_support(self.num_qubits(), estimate)?;
        if self.syndrome_of(actual)? != self.syndrome_of(estimate)? {
            return Ok(ResidualClass::SyndromeMismatch);
        }
        let residual = actual.mul(estimate);
        let x_ok = self.is_x_stabilizer(&residual.x)?;
        let z_ok = self.is_z_stabilizer(&residual.z)?;
        Ok(match (x_ok, z_ok) {
            (true, true) => ResidualClass::Success,
            (false, true) => ResidualClass::LogicalX,
            (true, false) => ResidualClass::LogicalZ,
            (false, false) => ResidualClass::LogicalXZ,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::build_bcc_colex;

    fn code() -> ColorCode {
        ColorCode::new(&build_bcc_colex(2).unwrap()).unwrap()
    }

    #[test]
    fn single_x_flags_six_edges() {
        let c = code();
        let n = c.num_qubits();
        for q in 0..n {
            let s = c.syndrome_of(&ErrorSupport::from_indices(n, [q], [])).unwrap();
            let mut tet = c.dual().qubit_edges(q).to_vec();
            tet.sort_unstable();
            assert_eq!(s.x.to_indices(), tet);
            assert!(s.z.is_zero());
        }
    }

    #[test]
    fn single_z_flags_four_vertices() {
        let c = code();
        let n = c.num_qubits();
        let s = c.syndrome_of(&ErrorSupport::from_indices(n, [], [11])).unwrap();
        let mut verts = c.dual().qubit_vertices(11).to_vec();
        verts.sort_unstable();
        assert_eq!(s.z.to_indices(), verts);
        assert!(s.x.is_zero());
    }

    #[test]
    fn all_ones_x_is_silent() {
        let c = code();
        let n = c.num_qubits();
        let e = ErrorSupport {
            x: Gf2Vector::ones(n),
            z: Gf2Vector::zeros(n),
        };
        assert!(c.syndrome_of(&e).unwrap().x.is_zero());
    }

    #[test]
    fn free_and_cached_syndromes_agree() {
        let c = code();
        let n = c.num_qubits();
        let e = ErrorSupport::from_indices(n, [0, 5, 17, 40], [3, 5, 90]);
        assert_eq!(syndrome_of(c.dual(), &e).unwrap(), c.syndrome_of(&e).unwrap());
    }

    #[test]
    fn generators_commute_and_edge_rows_are_even() {
        let c = code();
        let st = c.stabilizers();
        for i in 0..st.sx.rows() {
            for j in 0..st.sz.rows() {
                assert!(!st.sx.row(i).dot(&st.sz.row(j)), "rows {i},{j} anticommute");
            }
        }
        for e in 0..st.num_edge_rows {
            assert_eq!(st.sz.row_weight(e) % 2, 0);
        }
    }

    #[test]
    fn dimension_is_nine_on_l2() {
        let c = code();
        assert!(c.rank_x() < c.dual().num_vertices());
        assert_eq!(c.dimension(), 9);
    }

    #[test]
    fn residual_classes() {
        let c = code();
        let n = c.num_qubits();
        let e = ErrorSupport::from_indices(n, [1, 2], [7]);
        assert_eq!(c.residual_class(&e, &e).unwrap(), ResidualClass::Success);
        let mut shifted = e.clone();
        shifted.x.xor_assign(&c.stabilizers().sx.row(3));
        assert_eq!(c.residual_class(&e, &shifted).unwrap(), ResidualClass::Success);
        let off = ErrorSupport::from_indices(n, [1], [7]);
        assert_eq!(c.residual_class(&e, &off).unwrap(), ResidualClass::SyndromeMismatch);
        assert!(c.residual_class(&e, &ErrorSupport::identity(n + 1)).is_err());
    }
}
