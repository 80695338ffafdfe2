//! One line per acceptance criterion. Exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Zero;

use tropicert::fan::{
    is_balanced, is_connected_codim1, is_locally_extremal, is_nondegenerate, is_unimodular, validate_fan,
};
use tropicert::graph::{balance_coefficients, fan_laplacian, graph_of_fan, tropical_laplacian};
use tropicert::inertia::{check_sylvester, inertia_charpoly, inertia_congruence, Signature};
use tropicert::lattice::{minors_2x2, Int, Rat};
use tropicert::paper::{k44_matrix, paper_k44, paper_vertex_order, K44_MATRIX};
use tropicert::recession::{recession_fan, WeightedVComplex};
use tropicert::surgery::{
    fan_signature, minus_closed_form, minus_closed_form_derived, negative_edges, plus_closed_form,
    quadratic_delta_minus, quadratic_delta_plus, tilde, SurgeryKind,
};

use common::*;

const GOLDEN_LAPLACIAN: &str = include_str!("golden/tilde_laplacian_paper_order.txt");
const GOLDEN_MINORS: &str = include_str!("golden/k44_minors_paper.txt");

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn c1_determinant_and_minors() -> Outcome {
    let m = k44_matrix();
    let det = m.det().map_err(|e| e.to_string())?;
    let rows: Vec<Vec<Rat>> = K44_MATRIX.iter().map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect();
    let oracle = cofactor_det(&rows);
    ensure!(det == Int::from(-9), "det = {det}");
    ensure!(oracle == Rat::from_integer((-9).into()), "cofactor det = {oracle}");
    let minors = minors_2x2(&m).map_err(|e| e.to_string())?;
    let mut histogram: BTreeMap<Int, usize> = BTreeMap::new();
    for x in &minors {
        *histogram.entry(x.clone()).or_default() += 1;
    }
    let mut printed: BTreeMap<Int, usize> = BTreeMap::new();
    for line in GOLDEN_MINORS.lines().filter(|l| !l.trim().is_empty()) {
        *printed.entry(line.trim().parse().unwrap()).or_default() += 1;
    }
    // Direct 2x2 oracle over all row and column pairs.
    let mut direct: BTreeMap<Int, usize> = BTreeMap::new();
    for (r1, r2) in (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))) {
        for (c1, c2) in (0..4).flat_map(|a| (a + 1..4).map(move |b| (a, b))) {
            let v = K44_MATRIX[r1][c1] * K44_MATRIX[r2][c2] - K44_MATRIX[r1][c2] * K44_MATRIX[r2][c1];
            *direct.entry(Int::from(v)).or_default() += 1;
        }
    }
    let expected: BTreeMap<Int, usize> = [(-2, 3), (-1, 19), (1, 11), (2, 3)].into_iter().map(|(k, v)| (Int::from(k), v)).collect();
    ensure!(minors.len() == 36, "{} minors", minors.len());
    ensure!(histogram == expected, "minor multiset {histogram:?}");
    ensure!(printed == expected && direct == expected, "oracle multisets differ");
    Ok("det = -9; minors {-1 x19, +1 x11, -2 x3, +2 x3}".into())
}

fn c2_paper_fan_properties() -> Outcome {
    let f = paper_k44();
    ensure!(validate_fan(&f).is_valid(), "not a valid fan");
    ensure!(is_unimodular(&f), "not unimodular");
    ensure!(is_balanced(&f).is_balanced(), "not balanced");
    ensure!(is_nondegenerate(&f), "degenerate");
    ensure!(is_locally_extremal(&f), "not locally extremal");
    ensure!(is_connected_codim1(&f), "not connected in codimension 1");
    let neg = negative_edges(&f);
    // e2f4, e3f2, e4f3 with e_j = ray j-1 and f_i = ray 3+i.
    ensure!(neg == vec![(1, 7), (2, 5), (3, 6)], "negative edges {neg:?}");
    Ok("valid, unimodular, balanced, non-degenerate, locally extremal, connected; negative edges e2f4, e3f2, e4f3".into())
}

fn c3_golden_laplacian() -> Outcome {
    let t = tilde(&paper_k44()).map_err(|e| e.to_string())?;
    let order = paper_vertex_order(&t).ok_or("paper vertices missing from tilde fan")?;
    let b = balance_coefficients(&graph_of_fan(&t).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let lap = tropical_laplacian(&b, &order).map_err(|e| e.to_string())?;
    let golden = read_matrix(GOLDEN_LAPLACIAN);
    ensure!(golden.rows() == 14 && golden.cols() == 14, "golden is {}x{}", golden.rows(), golden.cols());
    for r in 0..14 {
        for c in 0..14 {
            ensure!(lap.matrix()[(r, c)] == golden[(r, c)], "entry ({r},{c}): {} vs {}", lap.matrix()[(r, c)], golden[(r, c)]);
        }
    }
    Ok("14x14 matrix matches entry-exactly".into())
}

fn c4_signatures() -> Outcome {
    let golden = read_matrix(GOLDEN_LAPLACIAN);
    let a = inertia_congruence(&golden).map_err(|e| e.to_string())?;
    let b = inertia_charpoly(&golden).map_err(|e| e.to_string())?;
    ensure!(a == Signature::new(7, 3, 4) && b == a, "tilde: congruence ({a}), charpoly ({b})");
    let (_, l8) = fan_laplacian(&paper_k44()).map_err(|e| e.to_string())?;
    let c = inertia_congruence(l8.matrix()).map_err(|e| e.to_string())?;
    let d = inertia_charpoly(l8.matrix()).map_err(|e| e.to_string())?;
    ensure!(c == Signature::new(4, 0, 4) && d == c, "K44: congruence ({c}), charpoly ({d})");
    Ok("tilde (7,3,4) and K44 (4,0,4), both algorithms".into())
}

fn c5_signature_laws() -> Outcome {
    let mut rng = rng(5);
    let (mut plus, mut minus) = (0, 0);
    for seq in 0..50 {
        let mut fan = paper_k44();
        let mut sig = fan_signature(&fan).map_err(|e| e.to_string())?;
        for _ in 0..4 {
            let kind = if rand::Rng::gen_bool(&mut rng, 0.5) { SurgeryKind::Plus } else { SurgeryKind::Minus };
            let Some((step, next)) = applicable(&fan, kind, &mut rng) else { continue };
            let w = fan.cones()[fan.find_cone(&[step.edge.0, step.edge.1]).unwrap()].weight.clone();
            let after = fan_signature(&next).map_err(|e| e.to_string())?;
            let expected = match kind {
                SurgeryKind::Plus if w > Rat::zero() => Signature::new(sig.n_plus + 1, sig.n_minus, sig.n_zero),
                SurgeryKind::Plus => Signature::new(sig.n_plus, sig.n_minus + 1, sig.n_zero),
                SurgeryKind::Minus => Signature::new(sig.n_plus + 1, sig.n_minus + 1, sig.n_zero),
            };
            ensure!(after == expected, "sequence {seq}: {kind:?} {:?} gave ({after}) from ({sig})", step.edge);
            match kind {
                SurgeryKind::Plus => plus += 1,
                SurgeryKind::Minus => minus += 1,
            }
            fan = next;
            sig = after;
        }
    }
    ensure!(plus > 0 && minus > 0, "plus {plus}, minus {minus} steps");
    Ok(format!("50 sequences, {plus} plus and {minus} minus steps, zero failures"))
}

fn c6_refinement_stability() -> Outcome {
    let mut rng = rng(6);
    let mut fan = tilde(&paper_k44()).map_err(|e| e.to_string())?;
    for step in 0..20 {
        let (_, next) = applicable(&fan, SurgeryKind::Plus, &mut rng).ok_or(format!("no plus step at {step}"))?;
        fan = next;
        let sig = fan_signature(&fan).map_err(|e| e.to_string())?;
        ensure!(sig.n_minus == 3, "step {step}: signature ({sig})");
    }
    Ok(format!("20 plus steps, n- = 3 throughout ({} rays)", fan.rays().len()))
}

fn c7_kernel_invariant() -> Outcome {
    let mut rng = rng(7);
    let mut fans = vec![paper_k44(), tilde(&paper_k44()).unwrap()];
    fans.extend((0..30).map(|_| random_surgery_fan(&mut rng, 5)));
    for (k, f) in fans.iter().enumerate() {
        let (b, lap) = fan_laplacian(f).map_err(|e| e.to_string())?;
        ensure!(lap.annihilates_vertices(b.graph()), "fan {k}: L U != 0");
        let sig = inertia_congruence(lap.matrix()).unwrap();
        if is_nondegenerate(f) {
            ensure!(sig.n_zero >= 4, "fan {k}: n0 = {}", sig.n_zero);
        }
    }
    let sig = fan_signature(&fans[1]).unwrap();
    ensure!(sig.n_zero == 4, "tilde n0 = {}", sig.n_zero);
    Ok(format!("L U = 0 on {} balanced graphs; n0 >= 4; n0(tilde) = 4", fans.len()))
}

fn c8_quadratic_deltas() -> Outcome {
    let mut rng = rng(8);
    let base = paper_k44();
    let n = base.rays().len();
    let weight = |i: usize, j: usize| base.cones()[base.find_cone(&[i, j]).unwrap()].weight.clone();
    // A positive and a negative edge for each surgery, 50 points apiece.
    let (mut plus_ok, mut minus_paper_ok, mut minus_derived_ok) = (0, 0, 0);
    for (i, j) in [(0, 5), (1, 7)] {
        let w = weight(i, j);
        for _ in 0..50 {
            let x = random_point(&mut rng, n + 1);
            let delta = quadratic_delta_plus(&base, i, j, &x).map_err(|e| e.to_string())?;
            ensure!(delta == oracle_delta(&base, &x, SurgeryKind::Plus, i, j), "plus delta disagrees with edge-list oracle");
            plus_ok += usize::from(delta == plus_closed_form(&w, &x[i], &x[j], &x[n]));
        }
    }
    for (i, j) in [(1, 7), (0, 6)] {
        let w = weight(i, j);
        for _ in 0..50 {
            let x = random_point(&mut rng, n + 2);
            let delta = quadratic_delta_minus(&base, i, j, &x).map_err(|e| e.to_string())?;
            ensure!(delta == oracle_delta(&base, &x, SurgeryKind::Minus, i, j), "minus delta disagrees with edge-list oracle");
            minus_paper_ok += usize::from(delta == minus_closed_form(&w, &x[i], &x[j], &x[n], &x[n + 1]));
            minus_derived_ok += usize::from(delta == minus_closed_form_derived(&w, &x[i], &x[j], &x[n], &x[n + 1]));
        }
    }
    let detail = format!(
        "plus {plus_ok}/100 match w(y-x1-x2)^2; minus {minus_paper_ok}/100 match w(y1+x1)(y2+x2); minus {minus_derived_ok}/100 match 2w(y1+x1)(y2+x2)"
    );
    ensure!(plus_ok == 100 && minus_paper_ok == 100, "{detail}");
    Ok(detail)
}

/// Q-difference from edge lists written out by hand from the surgery
/// definitions, without building either fan.
fn oracle_delta(base: &tropicert::fan::WeightedFan, x: &[Rat], kind: SurgeryKind, i: usize, j: usize) -> Rat {
    let (b, _) = fan_laplacian(base).unwrap();
    let n = base.rays().len();
    let edges: Vec<(usize, usize, Rat)> = b.graph().edges().iter().map(|e| (e.i, e.j, e.weight.clone())).collect();
    let before = quadratic_oracle(b.d(), &edges, &x[..n]);
    let w = edges.iter().find(|e| (e.0, e.1) == (i, j)).unwrap().2.clone();
    let mut after_edges: Vec<(usize, usize, Rat)> = edges.into_iter().filter(|e| (e.0, e.1) != (i, j)).collect();
    let mut d = b.d().to_vec();
    match kind {
        SurgeryKind::Plus => {
            // d at u_i, u_j grows by w; the new vertex has d = w.
            d[i] += &w;
            d[j] += &w;
            d.push(w.clone());
            after_edges.push((i, n, w.clone()));
            after_edges.push((j, n, w));
        }
        SurgeryKind::Minus => {
            // d unchanged at u_i, u_j; zero at both new vertices.
            d.push(Rat::zero());
            d.push(Rat::zero());
            after_edges.push((n, n + 1, -w.clone()));
            after_edges.push((n, j, -w.clone()));
            after_edges.push((i, n + 1, -w));
        }
    }
    quadratic_oracle(&d, &after_edges, x) - before
}

fn c9_oracle_agreement() -> Outcome {
    let mut rng = rng(9);
    let mut agreements = 0;
    for k in 0..240 {
        let n = 1 + k % 12;
        let s = if k % 3 == 2 { random_degenerate_symmetric(&mut rng, n) } else { random_symmetric(&mut rng, n, 9, if k % 2 == 0 { 1 } else { 4 }) };
        let a = inertia_congruence(&s).map_err(|e| e.to_string())?;
        let b = inertia_charpoly(&s).map_err(|e| e.to_string())?;
        ensure!(a == b, "matrix {k} ({n}x{n}): ({a}) vs ({b})");
        agreements += 1;
    }
    let mut sylvester = 0;
    for k in 0..100 {
        let n = 1 + k % 8;
        let s = random_symmetric(&mut rng, n, 9, 3);
        let a = random_invertible_rat(&mut rng, n);
        ensure!(check_sylvester(&s, &a).map_err(|e| e.to_string())?, "Sylvester failed on pair {k}");
        sylvester += 1;
    }
    Ok(format!("{agreements} random matrices agree; Sylvester on {sylvester} congruences"))
}

fn c10_balancing_equivalence() -> Outcome {
    let mut rng = rng(10);
    let (mut balanced, mut unbalanced) = (0, 0);
    for k in 0..40 {
        let f = random_surgery_fan(&mut rng, 3);
        let f = transformed(&f, &random_unimodular(&mut rng, 4, 6));
        let f = if k % 2 == 1 {
            let c = rand::Rng::gen_range(&mut rng, 0..f.cones().len());
            let w = &f.cones()[c].weight + random_rat(&mut rng, 3, 2);
            with_weight(&f, c, w)
        } else {
            f
        };
        ensure!(is_unimodular(&f), "fan {k} not unimodular");
        let by_faces = is_balanced(&f).is_balanced();
        let by_graph = balance_coefficients(&graph_of_fan(&f).unwrap()).is_ok();
        ensure!(by_faces == by_graph, "fan {k}: faces say {by_faces}, graph says {by_graph}");
        if by_faces {
            balanced += 1;
        } else {
            unbalanced += 1;
        }
    }
    ensure!(balanced >= 10 && unbalanced >= 10, "only {balanced} balanced and {unbalanced} unbalanced samples");
    Ok(format!("40 fans ({balanced} balanced, {unbalanced} unbalanced) agree"))
}

fn c11_recession() -> Outcome {
    let f = paper_k44();
    let c = WeightedVComplex::from_fan(&f);
    let r = recession_fan(&c, &f).map_err(|e| e.to_string())?;
    ensure!(r.fan == f && r.lower_dimensional.is_empty(), "recession fan of the fan differs");
    let mut rng = rng(11);
    for k in 0..10 {
        let b = random_point(&mut rng, 4);
        let r = recession_fan(&c.translated(&b), &f).map_err(|e| e.to_string())?;
        ensure!(r.fan == f, "translate {k} by {b:?} changes the recession fan");
    }
    let t = tilde(&f).unwrap();
    let rt = recession_fan(&WeightedVComplex::from_fan(&t), &t).map_err(|e| e.to_string())?;
    ensure!(rt.fan == t, "recession fan of tilde differs");
    Ok("identity on fans; 10 random translates of K44 recover K44 with its weights".into())
}

fn c12_certify_cli() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_tropicert");
    let dir = std::env::temp_dir().join(format!("tropicert-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let example = Command::new(bin).args(["paper-example", "--tilde"]).output().map_err(|e| e.to_string())?;
    ensure!(example.status.success(), "paper-example exited {:?}", example.status.code());
    let path = dir.join("tilde.fan");
    std::fs::write(&path, &example.stdout).map_err(|e| e.to_string())?;
    let run = || Command::new(bin).arg("certify").arg(&path).output();
    let first = run().map_err(|e| e.to_string())?;
    let second = run().map_err(|e| e.to_string())?;
    std::fs::remove_dir_all(&dir).ok();
    ensure!(first.status.code() == Some(0), "certify exited {:?}", first.status.code());
    let text = String::from_utf8_lossy(&first.stdout);
    ensure!(text.contains("\"conclusion\": \"COUNTEREXAMPLE_WITNESS\""), "conclusion missing");
    ensure!(first.stdout == second.stdout, "outputs differ between runs");
    Ok(format!("exit 0, COUNTEREXAMPLE_WITNESS, {} identical bytes", first.stdout.len()))
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "det(M) and 2x2 minors", budget: Some(Duration::from_millis(1)), run: c1_determinant_and_minors },
        Criterion { id: 2, name: "K44 fan properties", budget: Some(Duration::from_millis(10)), run: c2_paper_fan_properties },
        Criterion { id: 3, name: "14x14 Laplacian golden", budget: None, run: c3_golden_laplacian },
        Criterion { id: 4, name: "signatures (7,3,4) and (4,0,4)", budget: Some(Duration::from_millis(100)), run: c4_signatures },
        Criterion { id: 5, name: "surgery signature laws", budget: Some(Duration::from_secs(10)), run: c5_signature_laws },
        Criterion { id: 6, name: "refinement stability", budget: None, run: c6_refinement_stability },
        Criterion { id: 7, name: "kernel invariant", budget: None, run: c7_kernel_invariant },
        Criterion { id: 8, name: "quadratic-delta identities", budget: None, run: c8_quadratic_deltas },
        Criterion { id: 9, name: "inertia oracle agreement", budget: None, run: c9_oracle_agreement },
        Criterion { id: 10, name: "unimodular balancing equivalence", budget: None, run: c10_balancing_equivalence },
        Criterion { id: 11, name: "recession fans", budget: None, run: c11_recession },
        Criterion { id: 12, name: "certify end-to-end", budget: None, run: c12_certify_cli },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.budget) {
            (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:?}, budget {b:?}")),
            (o, _) => o,
        };
        let ms = elapsed.as_secs_f64() * 1e3;
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {} [{ms:.1} ms] {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {} [{ms:.1} ms] {why}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
