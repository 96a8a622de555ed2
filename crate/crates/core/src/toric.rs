//! Toric-code decoders on the minor complexes.
//!
//! On a one-color minor, X errors live on faces and are flagged on edges
//! (`∂₂`); the decoder returns a face set. On a two-color minor, Z errors
//! live on edges and are flagged on vertices (`∂₁`); the decoder returns an
//! edge set. All vectors here use the minor's local order.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dual::DualComplex;
use crate::gf2::{ColumnSolver, Gf2Matrix, Gf2Vector, RowBasis};
use crate::minors::{MinorComplexC, MinorComplexCC};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    /// Minimum-weight correction, exhaustive within the configured caps.
    ExactMinWeight,
    /// Any solution of the linear system.
    Gf2AnySolution,
    /// Nearest-neighbour pairing / greedy face cover.
    GreedyMatch,
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ExactMinWeight => "exact",
            Self::Gf2AnySolution => "gf2",
            Self::GreedyMatch => "greedy",
        })
    }
}

impl FromStr for DecoderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Self::ExactMinWeight),
            "gf2" => Ok(Self::Gf2AnySolution),
            "greedy" => Ok(Self::GreedyMatch),
            other => Err(format!("unknown decoder `{other}` (expected exact, gf2 or greedy)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoderConfig {
    pub kind: DecoderKind,
    /// Largest number of flagged vertices the exact matcher accepts.
    pub cap_matching: usize,
    /// Largest face-set weight the exact surface search explores.
    pub cap_surface: usize,
    /// Minimum-weight alternatives each component decoder may report.
    /// With 1 the pipeline uses only the first (canonical) estimate.
    pub max_candidates: usize,
    /// Combinations of component alternatives the pipeline tries per side.
    pub max_combinations: usize,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            kind: DecoderKind::ExactMinWeight,
            cap_matching: 12,
            cap_surface: 6,
            max_candidates: 16,
            max_combinations: 4096,
        }
    }
}

impl DecoderConfig {
    pub fn with_kind(kind: DecoderKind) -> Self {
        Self { kind, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ToricFailure {
    #[error("syndrome is not the boundary of any correction")]
    InvalidSyndrome,
    #[error("instance of size {size} exceeds cap {cap}")]
    Refused { size: usize, cap: usize },
}

/// Surface-code instance: faces of a one-color minor, flagged on its edges.
#[derive(Clone, Debug)]
pub struct ToricXInstance {
    face_edges: Vec<Vec<usize>>,
    edge_faces: Vec<Vec<usize>>,
    max_face_len: usize,
    solver: ColumnSolver,
    stabilizers: RowBasis,
}

impl ToricXInstance {
    pub fn new(minor: &MinorComplexC) -> Self {
        let nf = minor.faces().len();
        let face_edges: Vec<Vec<usize>> = (0..nf)
            .map(|i| {
                let mut es: Vec<usize> = minor
                    .face_edges(i)
                    .iter()
                    .map(|&e| minor.edge_position(e).expect("face edge lies in minor"))
                    .collect();
                es.sort_unstable();
                es
            })
            .collect();
        Self::from_faces(minor.edges().len(), face_edges, &minor.cell_generators())
    }

    /// Builds an instance from local face boundaries and stabilizer rows.
    pub fn from_faces(num_edges: usize, face_edges: Vec<Vec<usize>>, stabilizers: &Gf2Matrix) -> Self {
        let mut edge_faces = vec![Vec::new(); num_edges];
        for (f, es) in face_edges.iter().enumerate() {
            for &e in es {
                edge_faces[e].push(f);
            }
        }
        let boundary = Gf2Matrix::from_supports(face_edges.len(), edge_faces.iter().map(|fs| fs.iter().copied()));
        Self {
            max_face_len: face_edges.iter().map(Vec::len).max().unwrap_or(0),
            face_edges,
            edge_faces,
            solver: ColumnSolver::new(&boundary),
            stabilizers: RowBasis::new(stabilizers),
        }
    }

    pub fn num_faces(&self) -> usize {
        self.face_edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_faces.len()
    }

    pub fn syndrome_of(&self, faces: &Gf2Vector) -> Gf2Vector {
        let mut s = Gf2Vector::zeros(self.num_edges());
        for f in faces.iter_ones() {
            self.toggle(&mut s, f);
        }
        s
    }

    /// Whether two face sets differ by a product of cell generators.
    pub fn equivalent(&self, a: &Gf2Vector, b: &Gf2Vector) -> bool {
        self.stabilizers.contains(&a.xor(b)).unwrap_or(false)
    }

    fn toggle(&self, s: &mut Gf2Vector, f: usize) {
        for &e in &self.face_edges[f] {
            s.flip(e);
        }
    }

    /// Whether `s` is the boundary of some face set.
    pub fn is_boundary(&self, s: &Gf2Vector) -> bool {
        matches!(self.solver.is_consistent(s), Ok(true))
    }

    fn check(&self, s: &Gf2Vector) -> Result<(), ToricFailure> {
        match self.solver.is_consistent(s) {
            Ok(true) => Ok(()),
            _ => Err(ToricFailure::InvalidSyndrome),
        }
    }

    pub fn decode(&self, s: &Gf2Vector, cfg: &DecoderConfig) -> Result<Gf2Vector, ToricFailure> {
        self.check(s)?;
        match cfg.kind {
            DecoderKind::ExactMinWeight => Ok(self.exact(s, cfg.cap_surface, 1)?.swap_remove(0)),
            DecoderKind::Gf2AnySolution => self.gf2(s),
            DecoderKind::GreedyMatch => self.greedy(s),
        }
    }

    /// Minimum-weight alternatives (exact mode) or the single estimate
    /// (other modes). The first entry equals [`decode`](Self::decode).
    pub fn candidates(&self, s: &Gf2Vector, cfg: &DecoderConfig) -> Result<Vec<Gf2Vector>, ToricFailure> {
        self.check(s)?;
        match cfg.kind {
            DecoderKind::ExactMinWeight => self.exact(s, cfg.cap_surface, cfg.max_candidates.max(1)),
            _ => Ok(vec![self.decode(s, cfg)?]),
        }
    }

    fn gf2(&self, s: &Gf2Vector) -> Result<Gf2Vector, ToricFailure> {
        self.solver
            .solve(s)
            .ok()
            .flatten()
            .ok_or(ToricFailure::InvalidSyndrome)
    }

    fn exact(&self, s: &Gf2Vector, cap: usize, limit: usize) -> Result<Vec<Gf2Vector>, ToricFailure> {
        if s.is_zero() {
            return Ok(vec![Gf2Vector::zeros(self.num_faces())]);
        }
        let mut search = SurfaceSearch {
            inst: self,
            residual: s.clone(),
            chosen: Gf2Vector::zeros(self.num_faces()),
            found: Vec::new(),
            seen: HashSet::new(),
            limit,
        };
        for depth in 1..=cap {
            search.run(depth);
            if !search.found.is_empty() {
                return Ok(search.found);
            }
        }
        Err(ToricFailure::Refused { size: s.weight(), cap })
    }

    fn greedy(&self, s: &Gf2Vector) -> Result<Gf2Vector, ToricFailure> {
        let mut residual = s.clone();
        let mut chosen = Gf2Vector::zeros(self.num_faces());
        for _ in 0..self.num_faces() {
            let Some(e) = residual.first_one() else { break };
            let gain = |f: usize| {
                self.face_edges[f]
                    .iter()
                    .map(|&x| if residual.get(x) { 1i64 } else { -1 })
                    .sum::<i64>()
            };
            let f = *self.edge_faces[e]
                .iter()
                .max_by_key(|&&f| (gain(f), std::cmp::Reverse(f)))
                .expect("every edge lies in a face");
            self.toggle(&mut residual, f);
            chosen.flip(f);
        }
        if !residual.is_zero() {
            chosen.xor_assign(&self.gf2(&residual)?);
        }
        Ok(chosen)
    }
}

struct SurfaceSearch<'a> {
    inst: &'a ToricXInstance,
    residual: Gf2Vector,
    chosen: Gf2Vector,
    found: Vec<Gf2Vector>,
    seen: HashSet<Gf2Vector>,
    limit: usize,
}

impl SurfaceSearch<'_> {
    fn run(&mut self, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        let Some(e) = self.residual.first_one() else {
            if self.seen.insert(self.chosen.clone()) {
                self.found.push(self.chosen.clone());
            }
            return;
        };
        if depth == 0 || self.residual.weight() > depth * self.inst.max_face_len {
            return;
        }
        for &f in &self.inst.edge_faces[e] {
            if self.chosen.get(f) {
                continue;
            }
            self.inst.toggle(&mut self.residual, f);
            self.chosen.flip(f);
            self.run(depth - 1);
            self.chosen.flip(f);
            self.inst.toggle(&mut self.residual, f);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// Matching instance: edges of a two-color minor, flagged on its vertices.
#[derive(Clone, Debug)]
pub struct ToricZInstance {
    edges: Vec<[usize; 2]>,
    // (neighbour, edge), sorted
    adjacency: Vec<Vec<(usize, usize)>>,
    component: Vec<usize>,
    solver: ColumnSolver,
    stabilizers: RowBasis,
}

const UNREACHED: u32 = u32::MAX;

impl ToricZInstance {
    pub fn new(d: &DualComplex, minor: &MinorComplexCC) -> Self {
        let edges = minor
            .edges()
            .iter()
            .map(|&e| {
                d.complex()
                    .edge_vertices(e)
                    .map(|v| minor.vertex_position(v).expect("endpoint survives"))
            })
            .collect();
        Self::from_graph(minor.vertices().len(), edges, &minor.boundary_2().transpose())
    }

    /// Builds an instance from local edges and stabilizer rows over edges.
    pub fn from_graph(num_vertices: usize, edges: Vec<[usize; 2]>, stabilizers: &Gf2Matrix) -> Self {
        let mut adjacency = vec![Vec::new(); num_vertices];
        for (i, &[a, b]) in edges.iter().enumerate() {
            adjacency[a].push((b, i));
            adjacency[b].push((a, i));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let boundary = Gf2Matrix::from_supports(edges.len(), adjacency.iter().map(|a| a.iter().map(|&(_, e)| e)));
        let mut component = vec![usize::MAX; num_vertices];
        for start in 0..num_vertices {
            if component[start] != usize::MAX {
                continue;
            }
            component[start] = start;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &adjacency[u] {
                    if component[w] == usize::MAX {
                        component[w] = start;
                        queue.push_back(w);
                    }
                }
            }
        }
        Self {
            edges,
            adjacency,
            component,
            solver: ColumnSolver::new(&boundary),
            stabilizers: RowBasis::new(stabilizers),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn syndrome_of(&self, edges: &Gf2Vector) -> Gf2Vector {
        let mut s = Gf2Vector::zeros(self.num_vertices());
        for e in edges.iter_ones() {
            let [a, b] = self.edges[e];
            s.flip(a);
            s.flip(b);
        }
        s
    }

    /// Whether two edge sets differ by a product of face generators.
    pub fn equivalent(&self, a: &Gf2Vector, b: &Gf2Vector) -> bool {
        self.stabilizers.contains(&a.xor(b)).unwrap_or(false)
    }

    fn check(&self, s: &Gf2Vector) -> Result<(), ToricFailure> {
        let mut parity = vec![false; self.num_vertices()];
        for v in s.iter_ones() {
            parity[self.component[v]] ^= true;
        }
        if parity.iter().any(|&p| p) {
            Err(ToricFailure::InvalidSyndrome)
        } else {
            Ok(())
        }
    }

    pub fn decode(&self, s: &Gf2Vector, cfg: &DecoderConfig) -> Result<Gf2Vector, ToricFailure> {
        self.check(s)?;
        match cfg.kind {
            DecoderKind::ExactMinWeight => Ok(self.exact(s, cfg.cap_matching, 1)?.swap_remove(0)),
            DecoderKind::Gf2AnySolution => self
                .solver
                .solve(s)
                .ok()
                .flatten()
                .ok_or(ToricFailure::InvalidSyndrome),
            DecoderKind::GreedyMatch => Ok(self.greedy(s)),
        }
    }

    /// See [`ToricXInstance::candidates`].
    pub fn candidates(&self, s: &Gf2Vector, cfg: &DecoderConfig) -> Result<Vec<Gf2Vector>, ToricFailure> {
        self.check(s)?;
        match cfg.kind {
            DecoderKind::ExactMinWeight => self.exact(s, cfg.cap_matching, cfg.max_candidates.max(1)),
            _ => Ok(vec![self.decode(s, cfg)?]),
        }
    }

    fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.num_vertices()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in &self.adjacency[u] {
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest paths ending at `target`, walking down `dist`. Alternatives
    /// are produced in order of (vertex, edge) at each step.
    fn shortest_paths(&self, dist: &[u32], target: usize, limit: usize) -> Vec<Vec<usize>> {
        fn walk(inst: &ToricZInstance, dist: &[u32], at: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
            if out.len() >= limit {
                return;
            }
            if dist[at] == 0 {
                out.push(path.clone());
                return;
            }
            for &(w, e) in &inst.adjacency[at] {
                if dist[w] != UNREACHED && dist[w] + 1 == dist[at] {
                    path.push(e);
                    walk(inst, dist, w, path, out, limit);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, dist, target, &mut Vec::new(), &mut out, limit);
        out
    }

    fn exact(&self, s: &Gf2Vector, cap: usize, limit: usize) -> Result<Vec<Gf2Vector>, ToricFailure> {
        let flagged = s.to_indices();
        let k = flagged.len();
        if k == 0 {
            return Ok(vec![Gf2Vector::zeros(self.num_edges())]);
        }
        if k > cap {
            return Err(ToricFailure::Refused { size: k, cap });
        }
        let dists: Vec<Vec<u32>> = flagged.iter().map(|&t| self.bfs(t)).collect();
        let pair_cost = |i: usize, j: usize| dists[i][flagged[j]];

        // best[mask]: cheapest perfect matching of the flagged vertices in mask
        let full = (1usize << k) - 1;
        let mut best = vec![UNREACHED; 1 << k];
        best[0] = 0;
        for mask in 1..=full {
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let mut m = UNREACHED;
            for j in (i + 1)..k {
                if rest & (1 << j) == 0 {
                    continue;
                }
                let (c, sub) = (pair_cost(i, j), best[rest & !(1 << j)]);
                if c != UNREACHED && sub != UNREACHED {
                    m = m.min(c + sub);
                }
            }
            best[mask] = m;
        }
        if best[full] == UNREACHED {
            return Err(ToricFailure::InvalidSyndrome);
        }

        let mut matchings = Vec::new();
        enumerate_matchings(full, &best, &pair_cost, k, &mut Vec::new(), &mut matchings, limit);

        let mut out = Vec::new();
        let mut seen = HashSet::new();
        for pairs in matchings {
            let options: Vec<Vec<Vec<usize>>> = pairs
                .iter()
                .map(|&(i, j)| self.shortest_paths(&dists[i], flagged[j], limit))
                .collect();
            let mut choice = vec![0usize; options.len()];
            'odometer: loop {
                let mut v = Gf2Vector::zeros(self.num_edges());
                for (opts, &c) in options.iter().zip(&choice) {
                    for &e in &opts[c] {
                        v.flip(e);
                    }
                }
                if seen.insert(v.clone()) {
                    out.push(v);
                    if out.len() >= limit {
                        return Ok(out);
                    }
                }
                // last pair varies fastest
                let mut pos = choice.len();
                loop {
                    if pos == 0 {
                        break 'odometer;
                    }
                    pos -= 1;
                    choice[pos] += 1;
                    if choice[pos] < options[pos].len() {
                        continue 'odometer;
                    }
                    choice[pos] = 0;
                }
            }
        }
        Ok(out)
    }

    fn greedy(&self, s: &Gf2Vector) -> Gf2Vector {
        let mut open = s.clone();
        let mut out = Gf2Vector::zeros(self.num_edges());
        while let Some(a) = open.first_one() {
            open.flip(a);
            let dist = self.bfs(a);
            let partner = open
                .iter_ones()
                .filter(|&b| dist[b] != UNREACHED)
                .min_by_key(|&b| (dist[b], b))
                .expect("parity checked per component");
            open.flip(partner);
            for e in &self.shortest_paths(&dist, partner, 1)[0] {
                out.flip(*e);
            }
        }
        out
    }
}

fn enumerate_matchings(
    mask: usize,
    best: &[u32],
    cost: &dyn Fn(usize, usize) -> u32,
    k: usize,
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if mask == 0 {
        out.push(current.clone());
        return;
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    for j in (i + 1)..k {
        if rest & (1 << j) == 0 {
            continue;
        }
        let (c, sub) = (cost(i, j), best[rest & !(1 << j)]);
        if c != UNREACHED && sub != UNREACHED && c + sub == best[mask] {
            current.push((i, j));
            enumerate_matchings(rest & !(1 << j), best, cost, k, current, out, limit);
            current.pop();
        }
    }
}
