//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use colorproj::sim::SweepOptions;
use colorproj::{
    build_bcc_colex, dual, edge_boundary, face_boundary, lift_boundary, minor_c, minor_pair, sweep, Color,
    ColorCode, ColorCodeDecoder, ColorPair, Colex, DecoderConfig, DualComplex, ErrorSupport, ExecMode, Gf2Vector,
    NoiseModel, ResidualClass,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Suite {
    failed: usize,
}

impl Suite {
    fn run(&mut self, id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let (ok, detail) = match out {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; exceeded time limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            self.failed += 1;
        }
        println!(
            "{} criterion {id} ({name}): {detail} [{:.2?} / limit {limit:?}]",
            if ok { "PASS" } else { "FAIL" },
            took
        );
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_support(n: usize, rng: &mut ChaCha8Rng) -> Gf2Vector {
    let p: f64 = rng.random();
    let bits: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < p).collect();
    Gf2Vector::from_bools(&bits)
}

fn lattice(l: usize) -> (Colex, DualComplex) {
    let colex = build_bcc_colex(l).expect("even L builds");
    let d = dual(&colex).expect("generated lattice is valid");
    (colex, d)
}

fn structural_counts() -> Outcome {
    let mut checked = 0;
    for l in [2, 4] {
        let (colex, d) = lattice(l);
        let cx = colex.complex();
        let [v, e, f, nu] = cx.counts();
        let nu_c = colex.cells_per_color();
        let f_cc = colex.faces_per_pair();
        let fpair = |p: ColorPair| f_cc[p.index()];
        let mut expect = |what: String, got: usize, want: usize| -> Result<(), String> {
            checked += 1;
            ensure(got == want, || format!("L={l} {what}: {got} != {want}"))
        };
        // dual column
        expect("dual 3-cells = v".into(), d.num_qubits(), v)?;
        expect("dual faces = 2v".into(), d.num_faces(), 2 * v)?;
        expect("dual edges = f".into(), d.num_edges(), f)?;
        expect("dual vertices = nu".into(), d.num_vertices(), nu)?;
        for c in Color::ALL {
            let m = minor_c(&d, c);
            let others = c.others();
            let pairs_without_c: usize = ColorPair::ALL.iter().filter(|p| !p.contains(c)).map(|&p| fpair(p)).sum();
            expect(format!("minor {c} 3-cells = nu_c"), m.cells().len(), nu_c[c.index()])?;
            expect(format!("minor {c} faces = v/2"), m.faces().len(), v / 2)?;
            expect(format!("minor {c} edges"), m.edges().len(), pairs_without_c)?;
            expect(
                format!("minor {c} vertices"),
                m.vertices().len(),
                others.iter().map(|o| nu_c[o.index()]).sum(),
            )?;
        }
        for p in ColorPair::ALL {
            let m = minor_pair(&d, p);
            let q = p.complement();
            let nus = |x: ColorPair| nu_c[x.first().index()] + nu_c[x.second().index()];
            expect(format!("minor {p} 3-cells"), m.cells().len(), nus(p))?;
            expect(format!("minor {p} faces = f_cc'"), m.faces().len(), fpair(p))?;
            expect(format!("minor {p} edges = f_dd'"), m.edges().len(), fpair(q))?;
            expect(format!("minor {p} vertices"), m.vertices().len(), nus(q))?;
        }
        expect("E = 2V".into(), e, 2 * v)?;
        let chi = cx.euler_characteristic();
        checked += 1;
        ensure(chi == 0 && d.complex().euler_characteristic() == 0, || format!("L={l} Euler characteristic {chi}"))?;
    }
    Ok(format!(
        "14 identities (4 dual, 4 per one-color minor x4, 4 per two-color minor x6, E=2V, chi=0) on L=2 and L=4; {checked} equalities checked"
    ))
}

fn code_dimension() -> Outcome {
    let (colex, d) = lattice(2);
    let h1 = colex.complex().betti_1();
    let h1_dual = d.complex().betti_1();
    let code = ColorCode::from_dual(d);
    let k = code.dimension();
    ensure(h1 == 3 && h1_dual == 3, || format!("h1 = {h1} (dual {h1_dual}), expected 3"))?;
    ensure(k == 9 && k == 3 * h1, || format!("k = {k}, expected 9 = 3*h1"))?;
    Ok(format!(
        "n={} rank(Sx)={} rank(Sz)={} k={k}; h1={h1} from GF(2) homology of the lattice",
        code.num_qubits(),
        code.rank_x(),
        code.rank_z()
    ))
}

fn projection_commutes() -> Outcome {
    let (_, d) = lattice(2);
    let code = ColorCode::from_dual(d.clone());
    let n = d.num_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let colors: Vec<_> = Color::ALL.iter().map(|&c| minor_c(&d, c)).collect();
    let pairs: Vec<_> = ColorPair::ALL.iter().map(|&p| minor_pair(&d, p)).collect();
    let b2: Vec<_> = colors.iter().map(|m| m.boundary_2()).collect();
    let b1: Vec<_> = pairs.iter().map(|m| m.boundary_1(&d)).collect();
    let mut mismatches = 0;
    for _ in 0..1000 {
        let e = ErrorSupport {
            x: random_support(n, &mut rng),
            z: random_support(n, &mut rng),
        };
        let s = code.syndrome_of(&e).map_err(|e| e.to_string())?;
        for (m, b) in colors.iter().zip(&b2) {
            let toric = b.mul_vec(&m.project_error(&e.x)).map_err(|e| e.to_string())?;
            mismatches += usize::from(toric != m.restrict_edges(&s.x));
        }
        for (m, b) in pairs.iter().zip(&b1) {
            let toric = b.mul_vec(&m.project_error(&e.z)).map_err(|e| e.to_string())?;
            mismatches += usize::from(toric != m.restrict_vertices(&s.z));
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok("1000 random errors x (4 one-color + 6 two-color minors): 0 mismatches".into())
}

fn boundary_identities() -> Outcome {
    let (_, d) = lattice(2);
    let code = ColorCode::from_dual(d.clone());
    let n = d.num_qubits();
    let colors: Vec<_> = Color::ALL.iter().map(|&c| minor_c(&d, c)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let (mut face_bad, mut edge_bad) = (0, 0);
    for _ in 0..1000 {
        let omega = random_support(n, &mut rng);
        let mut from_minors = Gf2Vector::zeros(d.num_faces());
        for m in &colors {
            from_minors.xor_assign(&m.project_error(&omega).scatter(m.faces(), d.num_faces()));
        }
        face_bad += usize::from(face_boundary(&d, &omega).unwrap() != from_minors);
        let e = ErrorSupport {
            x: omega.clone(),
            z: Gf2Vector::zeros(n),
        };
        edge_bad += usize::from(code.syndrome_of(&e).unwrap().x != edge_boundary(&d, &omega).unwrap());
    }
    ensure(face_bad + edge_bad == 0, || format!("{face_bad} face-boundary and {edge_bad} edge-boundary mismatches"))?;
    Ok("1000 random supports: face boundary = sum of color projections, X syndrome = edge boundary; 0 mismatches".into())
}

fn stabilizer_projection() -> Outcome {
    let (_, d) = lattice(2);
    let colors: Vec<_> = Color::ALL.iter().map(|&c| minor_c(&d, c)).collect();
    let gens: Vec<_> = colors.iter().map(|m| m.cell_generators()).collect();
    let mut checked = 0;
    for v in 0..d.num_vertices() {
        let c = d.vertex_color(v);
        let star = Gf2Vector::from_indices(d.num_qubits(), d.vertex_qubits(v).iter().copied());
        for (m, g) in colors.iter().zip(&gens) {
            let proj = m.project_error(&star);
            if m.color() == c {
                let row = m
                    .cells()
                    .iter()
                    .position(|cell| cell.vertex == v)
                    .ok_or_else(|| format!("vertex {v} has no cell in minor {c}"))?;
                ensure(proj == g.row(row), || format!("vertex {v}: projection differs from its cell generator"))?;
                ensure(!proj.is_zero(), || format!("vertex {v}: empty generator"))?;
            } else {
                ensure(proj.is_zero(), || format!("vertex {v} ({c}) projects nontrivially on minor {}", m.color()))?;
            }
            checked += 1;
        }
    }
    Ok(format!("all {} dual vertices x 4 minors exhaustive ({checked} projections exact)", d.num_vertices()))
}

fn lifting() -> Outcome {
    let (_, d) = lattice(2);
    let n = d.num_qubits();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1F7);
    let mut wrong = 0;
    let mut swapped = 0;
    for _ in 0..500 {
        let omega = random_support(n, &mut rng);
        let w = omega.weight();
        let comp = omega.xor(&Gf2Vector::ones(n));
        let want = match w.cmp(&(n - w)) {
            std::cmp::Ordering::Less => omega.clone(),
            std::cmp::Ordering::Greater => comp,
            std::cmp::Ordering::Equal if omega.get(0) => omega.clone(),
            std::cmp::Ordering::Equal => comp,
        };
        swapped += usize::from(want != omega);
        let got = lift_boundary(&d, &face_boundary(&d, &omega).unwrap());
        wrong += usize::from(got.as_ref() != Ok(&want));
    }
    // oracle for "is a boundary": membership in the image of the dual's ∂₃
    let b3 = d.complex().boundary_3();
    let mut non_boundaries = 0;
    let mut accepted = 0;
    let mut draws = 0;
    while non_boundaries < 100 {
        draws += 1;
        let faces = random_support(d.num_faces(), &mut rng);
        if b3.solve(&faces).unwrap().is_some() {
            continue;
        }
        non_boundaries += 1;
        accepted += usize::from(lift_boundary(&d, &faces).is_ok());
    }
    ensure(wrong == 0 && accepted == 0, || {
        format!("{wrong} wrong lifts of true boundaries, {accepted} non-boundaries lifted")
    })?;
    Ok(format!(
        "500 random boundaries lifted to min(omega, complement) ({swapped} needed the complement); 100 non-boundaries ({draws} draws) all rejected"
    ))
}

/// Largest t such that no two errors of weight <= t share a syndrome while
/// differing by a non-stabilizer (computed over weight <= 2).
fn guarantee_radius(
    n: usize,
    syndrome: impl Fn(&Gf2Vector) -> Gf2Vector,
    stabilizer: impl Fn(&Gf2Vector) -> bool,
) -> (usize, HashMap<Gf2Vector, Vec<Gf2Vector>>) {
    let mut by_syn: HashMap<Gf2Vector, Vec<Gf2Vector>> = HashMap::new();
    by_syn.entry(syndrome(&Gf2Vector::zeros(n))).or_default().push(Gf2Vector::zeros(n));
    for a in 0..n {
        for b in a..n {
            let v = Gf2Vector::from_indices(n, [a, b]);
            by_syn.entry(syndrome(&v)).or_default().push(v);
        }
    }
    let mut radius = 2;
    for vs in by_syn.values() {
        for (i, u) in vs.iter().enumerate() {
            for w in &vs[i + 1..] {
                if !stabilizer(&u.xor(w)) {
                    radius = radius.min(u.weight().max(w.weight()) - 1);
                }
            }
        }
    }
    (radius, by_syn)
}

fn end_to_end() -> Outcome {
    let colex = build_bcc_colex(2).unwrap();
    let dec = ColorCodeDecoder::new(&colex, DecoderConfig::default()).map_err(|e| e.to_string())?;
    let code = dec.code();
    let n = code.num_qubits();
    let succeeds = |e: &ErrorSupport| {
        let s = code.syndrome_of(e).unwrap();
        matches!(dec.decode(&s), Ok(est) if code.residual_class(e, &est).unwrap() == ResidualClass::Success)
    };

    let mut w1_fail = 0;
    for q in 0..n {
        for e in [
            ErrorSupport::from_indices(n, [q], []),
            ErrorSupport::from_indices(n, [], [q]),
            ErrorSupport::from_indices(n, [q], [q]),
        ] {
            w1_fail += usize::from(!succeeds(&e));
        }
    }
    ensure(w1_fail == 0, || format!("{w1_fail} of {} weight-1 errors not corrected", 3 * n))?;

    let zeros = || Gf2Vector::zeros(n);
    let (rx, _) = guarantee_radius(
        n,
        |v| code.syndrome_of(&ErrorSupport { x: v.clone(), z: zeros() }).unwrap().x,
        |v| code.is_x_stabilizer(v).unwrap(),
    );
    let (rz, z_table) = guarantee_radius(
        n,
        |v| code.syndrome_of(&ErrorSupport { x: zeros(), z: v.clone() }).unwrap().z,
        |v| code.is_z_stabilizer(v).unwrap(),
    );

    let mut x2_fail = 0;
    let mut z2_fail: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut z2_total_fail = 0;
    let mut unexplained = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let ex = ErrorSupport::from_indices(n, [a, b], []);
            if !succeeds(&ex) {
                x2_fail += 1;
            }
            let ez = ErrorSupport::from_indices(n, [], [a, b]);
            if succeeds(&ez) {
                continue;
            }
            z2_total_fail += 1;
            let s = code.syndrome_of(&ez).unwrap();
            let canonical = dec.estimate_z_edge_boundary(&s.z).map_err(|e| e.to_string())?;
            let component_logical = ColorPair::ALL.iter().any(|&p| {
                let m = dec.pair_minor(p);
                let local = canonical.per_pair[p.index()].gather(m.edges());
                !dec.pair_toric(p).equivalent(&local, &m.project_error(&ez.z))
            });
            let tie = match dec.decode(&s) {
                Ok(est) => est.z.weight() <= ez.z.weight(),
                Err(_) => false,
            };
            let cause = if component_logical {
                "component logical error"
            } else if tie {
                "lifting tie"
            } else {
                unexplained.push((a, b));
                "unexplained"
            };
            *z2_fail.entry(cause).or_default() += 1;
            let ambiguous = z_table[&s.z].iter().any(|u| !code.is_z_stabilizer(&u.xor(&ez.z)).unwrap());
            if !ambiguous {
                *z2_fail.entry("(of which on unambiguous syndromes)").or_default() += 1;
            }
        }
    }
    let pairs = n * (n - 1) / 2;
    ensure(rx >= 2 || x2_fail > 0, || "inconsistent X radius".into())?;
    ensure(rx < 2 || x2_fail == 0, || format!("{x2_fail} weight-2 X errors inside the radius failed"))?;
    ensure(rz < 2 || z2_total_fail == 0, || format!("{z2_total_fail} weight-2 Z errors inside the radius failed"))?;
    ensure(unexplained.is_empty(), || format!("unattributed weight-2 failures: {unexplained:?}"))?;
    for (cause, count) in &z2_fail {
        println!("    weight-2 Z failure: {cause}: {count}");
    }
    Ok(format!(
        "weight-1 {}/{} corrected; measured radius X={rx}, Z={rz}; weight-2 X {}/{pairs} corrected; weight-2 Z {}/{pairs} corrected, every failure attributed",
        3 * n - w1_fail,
        3 * n,
        pairs - x2_fail,
        pairs - z2_total_fail
    ))
}

fn monte_carlo() -> Outcome {
    let colex = build_bcc_colex(2).unwrap();
    let dec = ColorCodeDecoder::new(&colex, DecoderConfig::default()).map_err(|e| e.to_string())?;
    let opts = SweepOptions {
        trials: 10_000,
        seed: 20_240_601,
        mode: ExecMode::Parallel,
        keep_records: false,
        lattice_size: Some(2),
    };
    let ps = [0.0, 0.001, 0.005, 0.02];
    let noise: Vec<_> = ps.iter().map(|&p| NoiseModel::independent(p).unwrap()).collect();
    let report = sweep(&dec, &noise, &opts).map_err(|e| e.to_string())?;
    let pts = &report.points;
    for pt in pts {
        println!(
            "    p={:<6} trials={} logical={} failed={} rate={:.5} wilson=[{:.5}, {:.5}]",
            pt.p, pt.trials, pt.logical, pt.failed, pt.rate, pt.ci_lo, pt.ci_hi
        );
    }
    ensure(report.verification_failures() == 0, || "internal verification failures".into())?;
    ensure(pts[0].logical + pts[0].failed == 0, || "nonzero rate at p=0".into())?;
    ensure(pts[1].rate < pts[2].rate && pts[2].rate < pts[3].rate, || "rate not strictly increasing".into())?;
    ensure(pts[1].ci_hi < pts[3].ci_lo, || "Wilson intervals of p=0.001 and p=0.02 overlap".into())?;
    Ok(format!(
        "rates {:.5} < {:.5} < {:.5}; intervals [{:.5}, {:.5}] and [{:.5}, {:.5}] disjoint; p=0 exactly 0",
        pts[1].rate, pts[2].rate, pts[3].rate, pts[1].ci_lo, pts[1].ci_hi, pts[3].ci_lo, pts[3].ci_hi
    ))
}

fn main() -> ExitCode {
    let mut suite = Suite { failed: 0 };
    let secs = Duration::from_secs;
    suite.run(1, "structural counts", secs(1), structural_counts);
    suite.run(2, "code dimension", secs(5), code_dimension);
    suite.run(3, "projection commutation", secs(600), projection_commutes);
    suite.run(4, "boundary identities", secs(600), boundary_identities);
    suite.run(5, "stabilizer projection", secs(600), stabilizer_projection);
    suite.run(6, "lifting", secs(600), lifting);
    suite.run(7, "end-to-end correction", secs(600), end_to_end);
    suite.run(8, "Monte Carlo sanity", secs(1800), monte_carlo);
    if suite.failed == 0 {
        println!("acceptance: all 8 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", suite.failed);
        ExitCode::FAILURE
    }
}
