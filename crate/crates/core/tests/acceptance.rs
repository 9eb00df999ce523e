// One line per acceptance criterion. Runs without the libtest harness so the
// lines show up in plain `cargo test` output; exits nonzero on any failure.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use coxinv::arrangements::arrangement_of;
use coxinv::forms::{build_form, pullback_deviation, FormTerm};
use coxinv::invariants::{chevalley_generators, real_generators, GeneratorSystem, GeneratorTag, Polynomial};
use coxinv::linalg::{self, Matrix};
use coxinv::oracle::{finite_orbit, oracle_separation_audit};
use coxinv::reflection_groups::{decompose, AffineWeylGroup, CoxeterGroup, Factor, FiniteCoxeterGroup, Isometry};
use coxinv::root_systems::{fundamental_weights, TypeLabel};
use coxinv::sampling::{cube_point, rng_for};
use coxinv::separator::{build_separating_map, check_separation, SeparatingMap};
use coxinv::transnormal::{check_transnormal, gram_matrix};
use coxinv::Num;

type Check = Result<(bool, String), Box<dyn std::error::Error>>;

const SEED: u64 = 2024;

fn finite(label: TypeLabel, rank: usize) -> FiniteCoxeterGroup {
    FiniteCoxeterGroup::of_type(label, rank).expect("typed finite group")
}

fn affine(label: TypeLabel, rank: usize) -> AffineWeylGroup {
    AffineWeylGroup::of_type(label, rank).expect("typed affine group")
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

/// Groups of the order criterion, with orders from closed formulas.
fn order_table() -> Vec<(TypeLabel, usize, u128)> {
    let mut t: Vec<(TypeLabel, usize, u128)> = (1..=4).map(|n| (TypeLabel::A, n, factorial(n as u128 + 1))).collect();
    t.extend((2..=3).map(|n| (TypeLabel::B, n, (1u128 << n) * factorial(n as u128))));
    t.push((TypeLabel::C, 3, 8 * 6));
    t.push((TypeLabel::D, 4, 8 * 24));
    t.push((TypeLabel::G, 2, 12));
    t.extend((2..=8).map(|m| (TypeLabel::I2(m), 2, 2 * m as u128)));
    t
}

fn affine_table() -> Vec<(TypeLabel, usize)> {
    vec![(TypeLabel::A, 1), (TypeLabel::A, 2), (TypeLabel::B, 2), (TypeLabel::G, 2)]
}

fn name(label: TypeLabel, rank: usize) -> String {
    match label {
        TypeLabel::I2(_) => label.to_string(),
        _ => format!("{label}{rank}"),
    }
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (label, rank, expected) in order_table() {
        let g = finite(label, rank);
        let enumerated = g.enumerate()?.len() as u128;
        if enumerated != expected || g.classified_order() != expected {
            bad.push(format!(
                "{} enumerated {enumerated} classified {} expected {expected}",
                name(label, rank),
                g.classified_order()
            ));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = bad.is_empty() && secs < 10.0;
    Ok((pass, format!("{} groups, mismatches {bad:?}, {secs:.2} s", order_table().len())))
}

/// Signed permutation of the coordinates.
fn signed_permutation<R: Rng>(rng: &mut R, n: usize) -> Isometry {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        m[(i, j)] = if rng.gen_bool(0.5) { Num::ONE } else { -Num::ONE };
    }
    Isometry::linear(m)
}

fn criterion_2() -> Check {
    let pool = [
        (TypeLabel::A, 1),
        (TypeLabel::A, 2),
        (TypeLabel::B, 2),
        (TypeLabel::G, 2),
        (TypeLabel::A, 3),
        (TypeLabel::B, 3),
    ];
    let mut details = Vec::new();
    let mut pass = true;
    for s in 0..5u64 {
        let mut rng = rng_for(SEED, s);
        let k = rng.gen_range(2..=3);
        let factors: Vec<Factor> = (0..k)
            .map(|_| {
                let (l, r) = pool[rng.gen_range(0..pool.len())];
                Factor::Finite(finite(l, r))
            })
            .collect();
        let ranks: Vec<usize> = factors.iter().map(|f| f.root_system().rank).collect();
        let trivial = rng.gen_range(0..=2);
        let group = CoxeterGroup::product(factors, trivial);
        let n = group.dim();

        // Ground truth: component of each generator, before mixing.
        let mut truth: Vec<(Isometry, usize)> = Vec::new();
        for (ci, c) in group.components().iter().enumerate() {
            for g in c.factor.generators() {
                truth.push((g.embed(c.offset, n), ci));
            }
        }
        truth.shuffle(&mut rng);
        let p = signed_permutation(&mut rng, n);
        let p_inv = p.inverse();
        let gens: Vec<Isometry> = truth.iter().map(|(g, _)| p.compose(g).compose(&p_inv)).collect();

        let dec = decompose(&gens, n)?;
        let residual = dec.residual(&gens);
        let exact = dec.e0.iter().chain(dec.factors.iter().flat_map(|f| &f.basis)).flatten().all(Num::is_exact);
        let found: BTreeSet<BTreeSet<usize>> =
            dec.factors.iter().map(|f| f.generator_indices.iter().copied().collect()).collect();
        let expected: BTreeSet<BTreeSet<usize>> =
            (0..k).map(|ci| truth.iter().enumerate().filter(|(_, t)| t.1 == ci).map(|(i, _)| i).collect()).collect();
        let e0_ok = dec.e0.len() == n - ranks.iter().sum::<usize>();
        let ok = residual == 0.0 && exact && found == expected && e0_ok;
        pass &= ok;
        details.push(format!("seed {s}: {} factors in R^{n}, residual {residual}", dec.factors.len()));
    }
    Ok((pass, details.join("; ")))
}

fn criterion_3() -> Check {
    let cases = [(TypeLabel::A, 2, 6), (TypeLabel::B, 2, 8), (TypeLabel::G, 2, 12), (TypeLabel::A, 3, 24)];
    let mut pass = true;
    let mut details = Vec::new();
    for (label, rank, expected) in cases {
        let g = finite(label, rank);
        // Independent route: a regular point has one orbit point per chamber.
        let regular = linalg::from_f64(&g.designated_point());
        let group = CoxeterGroup::finite(g);
        let chambers = arrangement_of(&group)?.count_chambers(SEED)?;
        let orbit = finite_orbit(&group, &regular)?.len();
        pass &= chambers == expected && orbit == expected;
        details.push(format!("{} {chambers}", name(label, rank)));
    }
    Ok((pass, details.join(", ")))
}

fn rotation_in_plane(n: usize, degrees: f64) -> Isometry {
    let (s, c) = degrees.to_radians().sin_cos();
    let mut m = Matrix::identity(n);
    m[(0, 0)] = Num::Float(c);
    m[(0, 1)] = Num::Float(-s);
    m[(1, 0)] = Num::Float(s);
    m[(1, 1)] = Num::Float(c);
    Isometry::linear(m)
}

fn criterion_4() -> Check {
    let mut groups: Vec<(String, CoxeterGroup)> =
        order_table().into_iter().map(|(l, r, _)| (name(l, r), CoxeterGroup::finite(finite(l, r)))).collect();
    groups.extend(
        affine_table().into_iter().map(|(l, r)| (format!("~{}", name(l, r)), CoxeterGroup::affine(affine(l, r)))),
    );
    let mut failures = Vec::new();
    let mut checks = 0;
    for (label, g) in &groups {
        let arr = arrangement_of(g)?;
        for gen in g.generators() {
            for r in [1.0, 10.0] {
                checks += 1;
                if !arr.is_invariant(&gen, r) {
                    failures.push(format!("{label} r={r}"));
                }
            }
        }
    }
    // A rotation by 10 degrees is not a symmetry of the B2 arrangement.
    let b2 = arrangement_of(&CoxeterGroup::finite(finite(TypeLabel::B, 2)))?;
    let control = !b2.is_invariant(&rotation_in_plane(2, 10.0), 1.0);
    Ok((
        failures.is_empty() && control,
        format!("{checks} generator/radius checks over {} groups, failures {failures:?}, rotation control rejected = {control}", groups.len()),
    ))
}

/// max |fᵢ(g·x) − fᵢ(x)| over seeded cube samples and the given isometries.
fn system_invariance(sys: &GeneratorSystem, gens: &[Isometry], samples: usize, r: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for s in 0..samples as u64 {
        let x = cube_point(&mut rng_for(SEED, s), sys.dim, r);
        let fx = sys.eval(&x);
        for g in gens {
            let gx = sys.eval(&g.apply_f64(&x));
            worst = fx.iter().zip(&gx).fold(worst, |m, (a, b)| m.max((a - b).abs()));
        }
    }
    worst
}

fn criterion_5() -> Check {
    let cases = [(TypeLabel::A, 2, vec![2, 3]), (TypeLabel::B, 2, vec![2, 4]), (TypeLabel::G, 2, vec![2, 6])];
    let mut pass = true;
    let mut details = Vec::new();
    for (label, rank, expected) in cases {
        let g = finite(label, rank);
        let sys = chevalley_generators(&g)?;
        let degrees = sys.degrees();
        // Independent route: Π dᵢ = |W| and Σ (dᵢ − 1) = number of positive roots.
        let product: u128 = degrees.iter().map(|&d| d as u128).product();
        let exponents: usize = degrees.iter().map(|&d| d as usize - 1).sum();
        let counts_ok = product == g.classified_order() && exponents == g.root_system.positive_roots.len();
        let volume = sys.jacobian_volume(&sys.designated_point);
        let dev = system_invariance(&sys, g.generators(), 500, 1.5);
        pass &= degrees == expected && counts_ok && volume > 1e-8 && dev < 1e-10;
        details.push(format!("{} degrees {degrees:?} |det| {volume:.3e} invariance {dev:.1e}", name(label, rank)));
    }
    Ok((pass, details.join("; ")))
}

fn criterion_6() -> Check {
    let mut pass = true;
    let mut details = Vec::new();
    for (label, rank) in affine_table() {
        let g = affine(label, rank);
        let sys = real_generators(&g)?;
        let gens = CoxeterGroup::affine(g.clone()).generators();
        let mut imag: f64 = 0.0;
        for s in 0..500u64 {
            let x = cube_point(&mut rng_for(SEED, s), sys.dim, 1.5);
            imag = sys.generators.iter().fold(imag, |m, f| m.max(f.eval_imag(&x).abs()));
        }
        let dev = system_invariance(&sys, &gens, 500, 1.5);
        let full_rank = sys.rank_at(&sys.designated_point) == rank;

        // Independent route for ϱ: −γᵢ lies in the finite orbit of γ_ϱ(i).
        let rho = sys.involution.clone().unwrap_or_default();
        let weights = fundamental_weights(g.root_system())?;
        let finite_part = CoxeterGroup::finite(g.finite_part.clone());
        let mut rho_ok = rho.len() == rank;
        for (i, &j) in rho.iter().enumerate() {
            let orbit = finite_orbit(&finite_part, &weights[j].coords)?;
            rho_ok &= orbit.contains(&linalg::neg(&weights[i].coords));
        }
        let split_ok = match (label, rank) {
            (TypeLabel::A, 2) => {
                rho == vec![1, 0]
                    && sys.degrees_or_weights
                        == vec![GeneratorTag::RealPart { weight: 0 }, GeneratorTag::ImagPart { weight: 1 }]
            }
            (TypeLabel::B, 2) => {
                rho == vec![0, 1] && sys.degrees_or_weights.iter().all(|t| matches!(t, GeneratorTag::Fixed { .. }))
            }
            _ => true,
        };
        pass &= imag < 1e-12 && dev < 1e-10 && full_rank && rho_ok && split_ok;
        details.push(format!("~{} imag {imag:.1e} invariance {dev:.1e} rho {rho:?}", name(label, rank)));
    }
    Ok((pass, details.join("; ")))
}

fn separation_groups() -> Vec<(String, CoxeterGroup)> {
    let mut v: Vec<(String, CoxeterGroup)> = [(TypeLabel::A, 2), (TypeLabel::B, 2), (TypeLabel::G, 2)]
        .into_iter()
        .map(|(l, r)| (name(l, r), CoxeterGroup::finite(finite(l, r))))
        .collect();
    v.extend(affine_table().into_iter().map(|(l, r)| (format!("~{}", name(l, r)), CoxeterGroup::affine(affine(l, r)))));
    v
}

fn criterion_7() -> Check {
    let mut pass = true;
    let mut details = Vec::new();
    for (label, g) in separation_groups() {
        let f = build_separating_map(&g)?;
        let sep = check_separation(&f, &g, 1000, 1e-6, SEED);
        let audit = oracle_separation_audit(&f, &g, 20, 3, SEED)?;
        pass &= sep.pass && sep.separation_min > 1e-6 && audit.pass && audit.constancy_deviation < 1e-9;
        details.push(format!("{label} margin {:.2e} constancy {:.1e}", sep.separation_min, audit.constancy_deviation));
    }
    // Negative controls: one generator loses a term and the audit must fail.
    let mut control = Vec::new();
    for (label, g, block, gen) in [
        ("G2", CoxeterGroup::finite(finite(TypeLabel::G, 2)), 0, 1),
        ("~A2", CoxeterGroup::affine(affine(TypeLabel::A, 2)), 0, 1),
    ] {
        let broken: SeparatingMap = build_separating_map(&g)?.corrupted(block, gen);
        let audit = oracle_separation_audit(&broken, &g, 20, 3, SEED)?;
        pass &= !audit.pass;
        control.push(format!("{label} corrupted constancy {:.2e}", audit.constancy_deviation));
    }
    Ok((pass, format!("{}; {}", details.join(", "), control.join(", "))))
}

fn criterion_8() -> Check {
    let mut pass = true;
    let mut details = Vec::new();
    for (label, g) in
        separation_groups().into_iter().filter(|(l, _)| ["A2", "B2", "G2", "~A1", "~A2"].contains(&l.as_str()))
    {
        let f = build_separating_map(&g)?;
        let r = check_transnormal(&f, &g, 300, 1e-8, 1e-8, SEED);
        pass &= r.gram.gram_deviation < 1e-8 && r.bracket.max_residual < 1e-8 && r.gradient_error < 1e-6;
        details.push(format!(
            "{label} gram {:.1e} bracket {:.1e} fd {:.1e}",
            r.gram.gram_deviation, r.bracket.max_residual, r.gradient_error
        ));
    }
    // Closed form on affine A1: b₁₁ = 4π²‖γ₁‖²(1 − y₁²).
    let a1 = affine(TypeLabel::A, 1);
    let gamma2 = linalg::norm2(&fundamental_weights(a1.root_system())?[0].coords).to_f64();
    let f = build_separating_map(&CoxeterGroup::affine(a1))?;
    let i = f.block_range(0).start;
    let mut closed: f64 = 0.0;
    for s in 0..300u64 {
        let x = cube_point(&mut rng_for(SEED, s), 2, 1.5);
        let y = f.eval(&x)[i];
        let predicted = 4.0 * PI * PI * gamma2 * (1.0 - y * y);
        closed = closed.max((gram_matrix(&f, &x)[i][i] - predicted).abs());
    }
    pass &= closed < 1e-9;
    details.push(format!("~A1 closed form {closed:.1e}"));
    Ok((pass, details.join("; ")))
}

fn criterion_9() -> Check {
    let mut pass = true;
    let mut details = Vec::new();
    for (label, rank) in [(TypeLabel::A, 2), (TypeLabel::B, 2)] {
        let g = CoxeterGroup::finite(finite(label, rank));
        let f = build_separating_map(&g)?;
        let n = f.output_dim;
        let (a, b) = (n - 2, n - 1);
        let forms = [
            build_form(
                &f,
                0,
                vec![FormTerm { indices: vec![], coefficient: Polynomial::var(n, a).mul(&Polynomial::var(n, b)) }],
            )?,
            build_form(
                &f,
                1,
                vec![
                    FormTerm { indices: vec![a], coefficient: Polynomial::var(n, b) },
                    FormTerm { indices: vec![b], coefficient: Polynomial::constant(n, Num::frac(1, 2)) },
                ],
            )?,
            build_form(&f, 2, vec![FormTerm { indices: vec![a, b], coefficient: Polynomial::var(n, a).pow(2) }])?,
        ];
        let mut worst: f64 = 0.0;
        for w in &forms {
            for gen in g.generators() {
                worst = worst.max(pullback_deviation(w, &gen, 50, SEED));
            }
        }
        let control = pullback_deviation(&forms[2], &rotation_in_plane(g.dim(), 10.0), 50, SEED);
        pass &= worst < 1e-10 && control > 1e-3;
        details.push(format!("{} group {worst:.1e} rotation {control:.2e}", name(label, rank)));
    }
    Ok((pass, details.join("; ")))
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_coxinv")).args(args).output().expect("binary runs");
    (out.status.code(), out.stdout)
}

fn criterion_10(suite_start: Instant) -> Check {
    let start = Instant::now();
    let specs = [
        r#"{"type":"A","rank":2}"#,
        r#"{"type":"B","rank":2,"affine":true}"#,
        r#"{"product":[{"type":"A","rank":1,"affine":true},{"type":"G","rank":2}],"trivial_dims":1}"#,
    ];
    let mut runs = 0;
    let mut mismatches = Vec::new();
    for spec in specs {
        let dim = if spec.contains("product") {
            6
        } else if spec.contains("affine") {
            2
        } else {
            3
        };
        let point = format!("[{}]", vec!["[1,3]"; dim].join(","));
        let commands: Vec<Vec<&str>> = vec![
            vec!["info", "--group", spec],
            vec!["invariants", "--group", spec],
            vec!["separate", "--group", spec, "--seed", "7"],
            vec!["transnormal", "--group", spec, "--seed", "7"],
            vec!["forms-check", "--group", spec, "--seed", "7"],
            vec!["arrangement", "--group", spec],
            vec!["orbit", "--group", spec, "--point", &point],
        ];
        for args in &commands {
            let first = run_cli(args);
            let second = run_cli(args);
            runs += 2;
            if first != second || first.0 != Some(0) || first.1.is_empty() {
                mismatches.push(format!("{} {spec} exit {:?}", args[0], first.0));
            }
        }
    }
    let cli_secs = start.elapsed().as_secs_f64();
    let total = suite_start.elapsed().as_secs_f64();
    Ok((
        mismatches.is_empty() && total < 300.0,
        format!("{runs} runs, mismatches {mismatches:?}, cli {cli_secs:.1} s, acceptance total {total:.1} s"),
    ))
}

type Criterion = (&'static str, Box<dyn Fn() -> Check>);

fn main() {
    let suite_start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("group orders", Box::new(criterion_1)),
        ("orthogonal decomposition", Box::new(criterion_2)),
        ("chamber counts", Box::new(criterion_3)),
        ("arrangement invariance", Box::new(criterion_4)),
        ("polynomial invariant systems", Box::new(criterion_5)),
        ("affine real generators", Box::new(criterion_6)),
        ("orbit separation", Box::new(criterion_7)),
        ("transnormality", Box::new(criterion_8)),
        ("invariant forms", Box::new(criterion_9)),
        ("determinism and runtime", Box::new(move || criterion_10(suite_start))),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let (pass, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!pass);
        println!("criterion {:>2} {} {title}: {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
