//! End-to-end color-code decoding through the minor toric codes.
//!
//! X side: restrict the edge syndrome to each one-color minor, decode there,
//! take the union of the returned faces as `∂E`, lift it to a set of qubits.
//!
//! Z side: restrict the vertex syndrome to each two-color minor, decode
//! there, take the union of the returned edges as `δE`. That edge set is a
//! valid edge boundary only if its restriction to every one-color minor is a
//! boundary there; it is then fed through the X side to get `∂E` and lifted.
//!
//! When a component decoder reports several minimum-weight corrections,
//! combinations are tried with canonical estimates first, up to a budget,
//! and the lightest lift among those that pass validation is kept.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::{ColorCode, ErrorSupport, Syndrome};
use crate::colex::Colex;
use crate::color::{Color, ColorPair};
use crate::dual::DualComplex;
use crate::error::{Error, Result};
use crate::gf2::Gf2Vector;
use crate::minors::{minor_c, minor_pair, MinorComplexC, MinorComplexCC};
use crate::toric::{DecoderConfig, ToricFailure, ToricXInstance, ToricZInstance};

/// Names one of the ten minor complexes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MinorId {
    Color(Color),
    Pair(ColorPair),
}

impl fmt::Display for MinorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Color(c) => write!(f, "{c}"),
            Self::Pair(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecodeFailure {
    #[error("estimated edge set is not an edge boundary")]
    InvalidEdgeBoundary,
    #[error("face set does not enclose a volume")]
    LiftContradiction,
    #[error("component decoder on minor {minor} found no correction")]
    ComponentDecoderFailure { minor: MinorId },
    #[error("component decoder on minor {minor} refused: size {size} exceeds cap {cap}")]
    ComponentRefusal { minor: MinorId, size: usize, cap: usize },
}

impl DecodeFailure {
    fn component(minor: MinorId, f: ToricFailure) -> Self {
        match f {
            ToricFailure::InvalidSyndrome => Self::ComponentDecoderFailure { minor },
            ToricFailure::Refused { size, cap } => Self::ComponentRefusal { minor, size, cap },
        }
    }

    /// Short snake-case tag, as used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::InvalidEdgeBoundary => "invalid_edge_boundary",
            Self::LiftContradiction => "lift_contradiction",
            Self::ComponentDecoderFailure { .. } => "component_decoder_failure",
            Self::ComponentRefusal { .. } => "component_refusal",
        }
    }
}

/// Lifts a face set to the smaller of the two qubit regions it separates.
///
/// Labels spread from qubit 0: crossing a face of `faces` flips the label.
/// A contradiction means `faces` is not a boundary. On a tie the region
/// containing qubit 0 is returned.
pub fn lift_boundary(d: &DualComplex, faces: &Gf2Vector) -> std::result::Result<Gf2Vector, DecodeFailure> {
    let n = d.num_qubits();
    let cx = d.complex();
    let mut label: Vec<Option<bool>> = vec![None; n];
    let mut stack = Vec::new();
    for start in 0..n {
        if label[start].is_some() {
            continue;
        }
        label[start] = Some(true);
        stack.push(start);
        while let Some(q) = stack.pop() {
            let lq = label[q].expect("labelled before push");
            for &f in cx.cell_faces(q) {
                let want = lq ^ faces.get(f);
                for &r in cx.face_cells(f) {
                    if r == q {
                        continue;
                    }
                    match label[r] {
                        None => {
                            label[r] = Some(want);
                            stack.push(r);
                        }
                        Some(l) if l != want => return Err(DecodeFailure::LiftContradiction),
                        Some(_) => {}
                    }
                }
            }
        }
    }
    let inside = Gf2Vector::from_bools(&label.iter().map(|l| *l == Some(true)).collect::<Vec<_>>());
    let w = inside.weight();
    Ok(if w <= n - w { inside } else { inside.xor(&Gf2Vector::ones(n)) })
}

/// Visits index tuples in order of increasing index sum, lexicographic
/// within one sum, until `visit` returns `true` or `budget` tuples have been
/// visited. Returns the number visited.
fn for_each_combination(lens: &[usize], budget: usize, mut visit: impl FnMut(&[usize]) -> bool) -> usize {
    fn fill(
        lens: &[usize],
        pos: usize,
        remaining: usize,
        choice: &mut Vec<usize>,
        visited: &mut usize,
        budget: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if *visited >= budget {
            return true;
        }
        if pos == lens.len() {
            if remaining > 0 {
                return false;
            }
            *visited += 1;
            return visit(choice);
        }
        let tail: usize = lens[pos + 1..].iter().map(|l| l - 1).sum();
        let lo = remaining.saturating_sub(tail);
        let hi = remaining.min(lens[pos] - 1);
        for i in lo..=hi {
            choice[pos] = i;
            if fill(lens, pos + 1, remaining - i, choice, visited, budget, visit) {
                return true;
            }
        }
        false
    }
    if lens.contains(&0) {
        return 0;
    }
    let max_sum: usize = lens.iter().map(|l| l - 1).sum();
    let mut choice = vec![0usize; lens.len()];
    let mut visited = 0;
    for total in 0..=max_sum {
        if fill(lens, 0, total, &mut choice, &mut visited, budget, &mut visit) {
            break;
        }
    }
    visited
}

/// Lightest accepted option; the earliest wins ties.
struct Lightest<T>(Option<(usize, T)>);

impl<T> Lightest<T> {
    fn offer(&mut self, weight: usize, value: T) {
        if self.0.as_ref().is_none_or(|(w, _)| weight < *w) {
            self.0 = Some((weight, value));
        }
    }

    fn take(self) -> Option<T> {
        self.0.map(|(_, v)| v)
    }
}

#[derive(Clone, Debug)]
struct ColorComponent {
    minor: MinorComplexC,
    toric: ToricXInstance,
}

#[derive(Clone, Debug)]
struct PairComponent {
    minor: MinorComplexCC,
    toric: ToricZInstance,
}

/// Per-decode bookkeeping.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeStats {
    /// Face-boundary combinations lifted on the X side.
    pub x_attempts: usize,
    /// Edge-boundary combinations examined on the Z side.
    pub z_attempts: usize,
    /// Total weight of the canonical face-set estimates on the one-color minors.
    pub x_component_weight: usize,
    /// Total weight of the canonical edge-set estimates on the two-color minors.
    pub z_component_weight: usize,
    /// Component decodes that hit a weight cap.
    pub refusals: usize,
}

/// Algorithm output for the X side: one face set per color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceBoundaryEstimate {
    /// Union of the per-color sets, over dual faces.
    pub faces: Gf2Vector,
    /// Indexed by [`Color::index`].
    pub per_color: Vec<Gf2Vector>,
}

/// Algorithm output for the Z side: one edge set per deleted pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBoundaryEstimate {
    /// Sum of the per-pair sets, over dual edges.
    pub edges: Gf2Vector,
    /// Indexed by [`ColorPair::index`] of the deleted pair.
    pub per_pair: Vec<Gf2Vector>,
}

fn union_of(len: usize, parts: &[Gf2Vector]) -> Gf2Vector {
    parts.iter().fold(Gf2Vector::zeros(len), |acc, p| acc.xor(p))
}

#[derive(Clone, Debug)]
pub struct ColorCodeDecoder {
    code: ColorCode,
    config: DecoderConfig,
    colors: Vec<ColorComponent>,
    pairs: Vec<PairComponent>,
}

impl ColorCodeDecoder {
    pub fn new(colex: &Colex, config: DecoderConfig) -> Result<Self> {
        Ok(Self::from_code(ColorCode::new(colex)?, config))
    }

    pub fn from_code(code: ColorCode, config: DecoderConfig) -> Self {
        let d = code.dual();
        let colors = Color::ALL
            .iter()
            .map(|&c| {
                let minor = minor_c(d, c);
                let toric = ToricXInstance::new(&minor);
                ColorComponent { minor, toric }
            })
            .collect();
        let pairs = ColorPair::ALL
            .iter()
            .map(|&p| {
                let minor = minor_pair(d, p);
                let toric = ToricZInstance::new(d, &minor);
                PairComponent { minor, toric }
            })
            .collect();
        Self {
            code,
            config,
            colors,
            pairs,
        }
    }

    pub fn code(&self) -> &ColorCode {
        &self.code
    }

    pub fn config(&self) -> &DecoderConfig {
        &self.config
    }

    pub fn color_minor(&self, c: Color) -> &MinorComplexC {
        &self.colors[c.index()].minor
    }

    /// The minor with `pair` deleted.
    pub fn pair_minor(&self, pair: ColorPair) -> &MinorComplexCC {
        &self.pairs[pair.index()].minor
    }

    pub fn color_toric(&self, c: Color) -> &ToricXInstance {
        &self.colors[c.index()].toric
    }

    pub fn pair_toric(&self, pair: ColorPair) -> &ToricZInstance {
        &self.pairs[pair.index()].toric
    }

    /// Edge syndrome seen by the toric code on the minor without `c`.
    pub fn project_x_syndrome(&self, c: Color, edges: &Gf2Vector) -> Gf2Vector {
        self.color_minor(c).restrict_edges(edges)
    }

    /// Vertex syndrome seen by the toric code on the minor without `pair`.
    pub fn project_z_syndrome(&self, pair: ColorPair, vertices: &Gf2Vector) -> Gf2Vector {
        self.pair_minor(pair).restrict_vertices(vertices)
    }

    /// Face boundary from the canonical component estimates.
    pub fn estimate_x_boundary(&self, edges: &Gf2Vector) -> std::result::Result<FaceBoundaryEstimate, DecodeFailure> {
        let per_color: Vec<Gf2Vector> = self.face_candidates(edges)?.into_iter().map(|mut c| c.swap_remove(0)).collect();
        Ok(FaceBoundaryEstimate {
            faces: union_of(self.code.dual().num_faces(), &per_color),
            per_color,
        })
    }

    /// Edge boundary from the canonical component estimates.
    pub fn estimate_z_edge_boundary(&self, vertices: &Gf2Vector) -> std::result::Result<EdgeBoundaryEstimate, DecodeFailure> {
        let per_pair: Vec<Gf2Vector> = self.edge_candidates(vertices)?.into_iter().map(|mut c| c.swap_remove(0)).collect();
        Ok(EdgeBoundaryEstimate {
            edges: union_of(self.code.dual().num_edges(), &per_pair),
            per_pair,
        })
    }

    /// Whether `edges` restricts to a boundary on every one-color minor.
    pub fn check_edge_boundary(&self, edges: &Gf2Vector) -> bool {
        self.colors
            .iter()
            .all(|comp| comp.toric.is_boundary(&comp.minor.restrict_edges(edges)))
    }

    /// Per-color minimum-weight face-set candidates for an edge syndrome,
    /// scattered to dual face ids.
    pub fn face_candidates(&self, edges: &Gf2Vector) -> std::result::Result<Vec<Vec<Gf2Vector>>, DecodeFailure> {
        let nf = self.code.dual().num_faces();
        self.colors
            .iter()
            .map(|comp| {
                let s = comp.minor.restrict_edges(edges);
                let local = comp
                    .toric
                    .candidates(&s, &self.config)
                    .map_err(|f| DecodeFailure::component(MinorId::Color(comp.minor.color()), f))?;
                Ok(local.iter().map(|v| v.scatter(comp.minor.faces(), nf)).collect())
            })
            .collect()
    }

    /// Per-pair minimum-weight edge-set candidates for a vertex syndrome,
    /// scattered to dual edge ids.
    pub fn edge_candidates(&self, vertices: &Gf2Vector) -> std::result::Result<Vec<Vec<Gf2Vector>>, DecodeFailure> {
        let ne = self.code.dual().num_edges();
        self.pairs
            .iter()
            .map(|comp| {
                let s = comp.minor.restrict_vertices(vertices);
                let local = comp
                    .toric
                    .candidates(&s, &self.config)
                    .map_err(|f| DecodeFailure::component(MinorId::Pair(comp.minor.pair()), f))?;
                Ok(local.iter().map(|v| v.scatter(comp.minor.edges(), ne)).collect())
            })
            .collect()
    }

    /// Estimates the qubit support whose edge boundary is `edges`.
    fn decode_edge_syndrome(&self, edges: &Gf2Vector, budget: usize, stats: &mut DecodeStats) -> (std::result::Result<Gf2Vector, DecodeFailure>, usize) {
        let cands = match self.face_candidates(edges) {
            Ok(c) => c,
            Err(f) => {
                stats.refusals += usize::from(matches!(f, DecodeFailure::ComponentRefusal { .. }));
                return (Err(f), 0);
            }
        };
        let lens: Vec<usize> = cands.iter().map(Vec::len).collect();
        let mut pick = Lightest(None);
        let tried = for_each_combination(&lens, budget.max(1), |choice| {
            let mut faces = Gf2Vector::zeros(self.code.dual().num_faces());
            for (per_color, &i) in cands.iter().zip(choice) {
                faces.xor_assign(&per_color[i]);
            }
            if let Ok(omega) = lift_boundary(self.code.dual(), &faces) {
                pick.offer(omega.weight(), omega);
            }
            false
        });
        (pick.take().ok_or(DecodeFailure::LiftContradiction), tried)
    }

    fn decode_x(&self, s: &Gf2Vector, stats: &mut DecodeStats) -> std::result::Result<Gf2Vector, DecodeFailure> {
        if let Ok(est) = self.estimate_x_boundary(s) {
            stats.x_component_weight += est.faces.weight();
        }
        let (r, tried) = self.decode_edge_syndrome(s, self.config.max_combinations, stats);
        stats.x_attempts += tried;
        r
    }

    fn decode_z(&self, s: &Gf2Vector, stats: &mut DecodeStats) -> std::result::Result<Gf2Vector, DecodeFailure> {
        let cands = self.edge_candidates(s).inspect_err(|f| {
            stats.refusals += usize::from(matches!(f, DecodeFailure::ComponentRefusal { .. }));
        })?;
        stats.z_component_weight += cands.iter().map(|c| c[0].weight()).sum::<usize>();
        let lens: Vec<usize> = cands.iter().map(Vec::len).collect();
        let mut budget = self.config.max_combinations.max(1);
        let mut first_failure = None;
        let mut pick = Lightest(None);
        stats.z_attempts += for_each_combination(&lens, budget, |choice| {
            if budget == 0 {
                return true;
            }
            let mut edges = Gf2Vector::zeros(self.code.dual().num_edges());
            for (per_pair, &i) in cands.iter().zip(choice) {
                edges.xor_assign(&per_pair[i]);
            }
            budget -= 1;
            let outcome = if self.check_edge_boundary(&edges) {
                let (r, tried) = self.decode_edge_syndrome(&edges, budget, stats);
                budget = budget.saturating_sub(tried);
                stats.x_attempts += tried;
                r
            } else {
                Err(DecodeFailure::InvalidEdgeBoundary)
            };
            match outcome {
                Ok(omega) => pick.offer(omega.weight(), omega),
                Err(f) => {
                    first_failure.get_or_insert(f);
                }
            }
            false
        });
        pick.take()
            .ok_or_else(|| first_failure.unwrap_or(DecodeFailure::InvalidEdgeBoundary))
    }

    /// Panics if the syndrome does not match the code's shape.
    pub fn decode(&self, syndrome: &Syndrome) -> std::result::Result<ErrorSupport, DecodeFailure> {
        self.decode_with_stats(syndrome).0
    }

    /// Panics if the syndrome does not match the code's shape; see
    /// [`try_decode`](Self::try_decode).
    pub fn decode_with_stats(&self, syndrome: &Syndrome) -> (std::result::Result<ErrorSupport, DecodeFailure>, DecodeStats) {
        let mut stats = DecodeStats::default();
        let r = self.decode_x(&syndrome.x, &mut stats).and_then(|x| {
            let z = self.decode_z(&syndrome.z, &mut stats)?;
            Ok(ErrorSupport { x, z })
        });
        (r, stats)
    }

    /// Decodes only the X part of a syndrome (edge syndrome).
    pub fn decode_x_part(&self, edge_syndrome: &Gf2Vector) -> std::result::Result<Gf2Vector, DecodeFailure> {
        self.decode_x(edge_syndrome, &mut DecodeStats::default())
    }

    /// Decodes only the Z part of a syndrome (vertex syndrome).
    pub fn decode_z_part(&self, vertex_syndrome: &Gf2Vector) -> std::result::Result<Gf2Vector, DecodeFailure> {
        self.decode_z(vertex_syndrome, &mut DecodeStats::default())
    }

    /// Like [`decode`](Self::decode) but rejects malformed syndromes with an error.
    pub fn try_decode(&self, syndrome: &Syndrome) -> Result<std::result::Result<ErrorSupport, DecodeFailure>> {
        let d = self.code.dual();
        if syndrome.x.len() != d.num_edges() {
            return Err(Error::SizeMismatch {
                what: "edge syndrome",
                expected: d.num_edges(),
                found: syndrome.x.len(),
            });
        }
        if syndrome.z.len() != d.num_vertices() {
            return Err(Error::SizeMismatch {
                what: "vertex syndrome",
                expected: d.num_vertices(),
                found: syndrome.z.len(),
            });
        }
        Ok(self.decode(syndrome))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colex::build_bcc_colex;
    use crate::minors::{edge_boundary, face_boundary};

    fn decoder(max_candidates: usize) -> ColorCodeDecoder {
        let cfg = DecoderConfig {
            max_candidates,
            ..DecoderConfig::default()
        };
        ColorCodeDecoder::new(&build_bcc_colex(2).unwrap(), cfg).unwrap()
    }

    #[test]
    fn combinations_are_lexicographic_and_budgeted() {
        let mut seen = Vec::new();
        let n = for_each_combination(&[2, 1, 3], 100, |c| {
            seen.push(c.to_vec());
            false
        });
        assert_eq!(n, 6);
        assert_eq!(
            seen,
            vec![vec![0, 0, 0], vec![0, 0, 1], vec![1, 0, 0], vec![0, 0, 2], vec![1, 0, 1], vec![1, 0, 2]]
        );
        assert_eq!(for_each_combination(&[4, 4], 5, |_| false), 5);
        assert_eq!(for_each_combination(&[3, 0], 5, |_| false), 0);
        assert_eq!(for_each_combination(&[], 5, |c| c.is_empty()), 1);
    }

    #[test]
    fn lift_recovers_small_side() {
        let d = decoder(1);
        let dual = d.code().dual();
        let n = dual.num_qubits();
        let omega = Gf2Vector::from_indices(n, [2, 3, 40]);
        assert_eq!(lift_boundary(dual, &face_boundary(dual, &omega).unwrap()).unwrap(), omega);
        let big = omega.xor(&Gf2Vector::ones(n));
        assert_eq!(lift_boundary(dual, &face_boundary(dual, &big).unwrap()).unwrap(), omega);
        assert!(lift_boundary(dual, &Gf2Vector::zeros(dual.num_faces())).unwrap().is_zero());
        let lone = Gf2Vector::from_indices(dual.num_faces(), [0]);
        assert_eq!(lift_boundary(dual, &lone), Err(DecodeFailure::LiftContradiction));
    }

    #[test]
    fn true_edge_boundaries_pass_the_check() {
        let d = decoder(1);
        let dual = d.code().dual();
        for q in 0..dual.num_qubits() {
            let omega = Gf2Vector::from_indices(dual.num_qubits(), [q, (q * 13 + 5) % dual.num_qubits()]);
            assert!(d.check_edge_boundary(&edge_boundary(dual, &omega).unwrap()));
        }
    }

    #[test]
    fn single_errors_decode_exactly() {
        let d = decoder(DecoderConfig::default().max_candidates);
        let n = d.code().num_qubits();
        for q in 0..n {
            for e in [
                ErrorSupport::from_indices(n, [q], []),
                ErrorSupport::from_indices(n, [], [q]),
                ErrorSupport::from_indices(n, [q], [q]),
            ] {
                let s = d.code().syndrome_of(&e).unwrap();
                let est = d.decode(&s).unwrap();
                assert_eq!(est, e, "qubit {q}");
            }
        }
    }

    #[test]
    fn trivial_syndrome_gives_identity() {
        let d = decoder(1);
        let n = d.code().num_qubits();
        let s = d.code().syndrome_of(&ErrorSupport::identity(n)).unwrap();
        assert_eq!(d.decode(&s).unwrap(), ErrorSupport::identity(n));
    }

    #[test]
    fn failure_tags_serialize() {
        let f = DecodeFailure::ComponentRefusal {
            minor: MinorId::Pair(ColorPair::ALL[0]),
            size: 14,
            cap: 12,
        };
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"component_refusal\""));
        assert!(json.contains("\"rg\""));
        assert_eq!(f.tag(), "component_refusal");
    }
}
