//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.

use std::f64::consts::PI;

use dirac_fem::analysis::{
    classify_levels, tau_balance_residual, tau_limit_lambda, Label, LevelClassification,
};
use dirac_fem::assembly::{
    assemble_block, closed_form_element_entries, stability_parameter, BlockMatrixSpec, DofLayout,
};
use dirac_fem::discretization::{
    hermite_interpolation_error_order, BasisFamily, HermiteInterpolant, HermitePart,
};
use dirac_fem::{
    assemble, assemble_hermite_galerkin, assemble_linear_galerkin, assemble_supg,
    reference_binding, solve, solve_with, BasisKind, Mesh, OperatorParams, PotentialModel, Scheme,
    SolverOptions, StabilizationProfile,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn params(z: f64, kappa: i32) -> OperatorParams<f64> {
    OperatorParams::new(z, kappa).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn classified(
    scheme: Scheme,
    z: f64,
    kappa: i32,
    mesh: &Mesh<f64>,
    levels: usize,
    match_tol: f64,
) -> LevelClassification<f64> {
    let p = params(z, kappa);
    let system = assemble(scheme, &p, mesh, &PotentialModel::point(z), false).unwrap();
    let spectrum = solve(&system, 1e-8).unwrap();
    classify_levels(&spectrum.bindings, &p, levels, match_tol).unwrap()
}

/// Printed digits of a table entry: `(value, last printed decimal place)`.
fn printed(text: &str) -> (f64, f64) {
    let decimals = text.split('.').nth(1).map_or(0, str::len) as i32;
    (text.parse().unwrap(), 10f64.powi(-decimals))
}

fn c1_reference_formula() -> Outcome {
    const HYDROGEN: [&str; 6] = [
        "-0.50000665659",
        "-0.12500208018",
        "-0.05555629517",
        "-0.03125033803",
        "-0.02000018105",
        "-0.01388899674",
    ];
    const MAGNESIUM: [&str; 15] = [
        "-18.0086349982",
        "-8.00511739963",
        "-4.50269856638",
        "-2.88154739168",
        "-2.00095939879",
        "-1.47002066823",
        "-1.12543844140",
        "-.889204706429",
        "-.720234829539",
        "-.595220579682",
        "-.500139887884",
        "-.426146735771",
        "-.367436826403",
        "-.320073665658",
        "-.281311119433",
    ];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (z, kappa, table) in [(1.0, -1, &HYDROGEN[..]), (12.0, -2, &MAGNESIUM[..])] {
        let p = params(z, kappa);
        for (n_r, text) in table.iter().enumerate() {
            let (value, ulp) = printed(text);
            let got = reference_binding(&p, n_r as u32).unwrap().binding;
            let allowed = ulp.max(1e-11 * value.abs());
            worst = worst.max((got - value).abs() / allowed);
            count += 1;
        }
    }
    outcome(
        worst <= 1.0,
        format!("{count} printed levels, worst deviation {worst:.3} of allowance"),
    )
}

fn c2_element_integrals() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pot = PotentialModel::point(1.0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.gen_range(3..12);
        let mut nodes = vec![rng.gen_range(1e-4..1.0)];
        for _ in 0..=n {
            let step: f64 = 10f64.powf(rng.gen_range(-3.0..0.5));
            nodes.push(nodes.last().unwrap() + step);
        }
        let mesh = Mesh::from_nodes(nodes).unwrap();
        let layout = DofLayout::new(BasisKind::CubicHermite, n, false);
        let blocks = [
            BlockMatrixSpec::M000,
            BlockMatrixSpec::M100,
            BlockMatrixSpec::M010,
            BlockMatrixSpec::M110,
        ]
        .map(|spec| assemble_block(spec, &mesh, &layout, &pot, None).unwrap());
        for j in 2..n {
            let exact = closed_form_element_entries(&mesh, j).unwrap();
            let tables = [exact.m000, exact.m100, exact.m010, exact.m110];
            let columns = [
                (j - 1, HermitePart::Value),
                (j, HermitePart::Value),
                (j + 1, HermitePart::Value),
                (j - 1, HermitePart::Slope),
                (j, HermitePart::Slope),
                (j + 1, HermitePart::Slope),
            ];
            for (block, table) in blocks.iter().zip(tables) {
                for (row_part, row) in [HermitePart::Value, HermitePart::Slope]
                    .into_iter()
                    .zip(table)
                {
                    let r = layout.local_index(j, row_part).unwrap();
                    // exact zeros are compared against the row magnitude
                    let scale = row.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                    for ((node, part), expected) in columns.into_iter().zip(row) {
                        let got = block[(r, layout.local_index(node, part).unwrap())];
                        let denom = if expected == 0.0 {
                            scale
                        } else {
                            expected.abs()
                        };
                        worst = worst.max((got - expected).abs() / denom);
                    }
                }
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("100 random meshes, worst relative deviation {worst:.2e}"),
    )
}

fn hydrogen_mesh() -> Mesh<f64> {
    Mesh::exponential(1e-5, 60.0, 100, 12.0).unwrap()
}

fn c3_linear_pathology() -> Outcome {
    let mesh = hydrogen_mesh();
    let neg = classified(Scheme::LinearGalerkin, 1.0, -1, &mesh, 6, 1e-3);
    let pos = classified(Scheme::LinearGalerkin, 1.0, 1, &mesh, 6, 1e-3);
    let ground = neg.classified.entries[0].binding;
    let ground_ok = rel(ground, -0.50000665659) <= 1e-6;
    let spurious = neg.classified.spurious_between(&neg.reference, 2);
    let pos_spurious = pos.classified.spurious_between(&pos.reference, 1);
    let first_pos = pos.classified.entries[0].clone();
    let coincidence =
        first_pos.label == Label::CoincidenceSpurious && rel(first_pos.binding, ground) <= 1e-6;
    let stray = neg
        .classified
        .entries
        .iter()
        .find(|e| e.label == Label::InstilledSpurious)
        .map_or(f64::NAN, |e| e.binding);
    outcome(
        ground_ok && spurious >= 1 && coincidence,
        format!(
            "ground {ground:.11}, {spurious} spurious between levels 3 and 4 (at {stray:.6}; kappa=+1: {pos_spurious}), kappa=+1 first {:.11} labelled {}",
            first_pos.binding, first_pos.label
        ),
    )
}

fn c4_hermite_partial_cure() -> Outcome {
    let mesh = hydrogen_mesh();
    let neg = classified(Scheme::HermiteGalerkin, 1.0, -1, &mesh, 6, 1e-5);
    let pos = classified(Scheme::HermiteGalerkin, 1.0, 1, &mesh, 6, 1e-5);
    let fourth = neg.reference[3].binding;
    let low_spurious = neg
        .classified
        .entries
        .iter()
        .filter(|e| e.label == Label::InstilledSpurious && e.binding <= fourth)
        .count();
    let worst_abs = (0..3)
        .map(|l| {
            neg.classified
                .matched(l, &neg.reference)
                .map_or(f64::INFINITY, |e| {
                    (e.binding - neg.reference[l].binding).abs()
                })
        })
        .fold(0.0, f64::max);
    let first_pos = &pos.classified.entries[0];
    let coincidence = first_pos.label == Label::CoincidenceSpurious;
    outcome(
        low_spurious == 0 && worst_abs <= 1e-6 && coincidence,
        format!(
            "{low_spurious} spurious below level 4, first 3 levels within {worst_abs:.2e} absolute, kappa=+1 first {:.11} labelled {}",
            first_pos.binding, first_pos.label
        ),
    )
}

fn c5_supg_full_cure() -> Outcome {
    let mesh = Mesh::exponential(1e-5, 120.0, 400, 10.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut spurious = 0;
    let mut matched = 0;
    for kappa in [-2, 2] {
        let out = classified(Scheme::HermiteSupg, 12.0, kappa, &mesh, 12, 1e-5);
        spurious += out
            .classified
            .entries
            .iter()
            .filter(|e| e.label.is_spurious())
            .count();
        for l in 0..12 {
            if let Some(e) = out.classified.matched(l, &out.reference) {
                matched += 1;
                worst = worst.max(e.rel_error.unwrap());
            } else {
                worst = f64::INFINITY;
            }
        }
    }

    let z = 92.0;
    let uranium = Mesh::exponential(1e-5, 0.65, 200, 8.0).unwrap();
    let p = params(z, 1);
    let system = assemble(
        Scheme::HermiteSupg,
        &p,
        &uranium,
        &PotentialModel::point(z),
        false,
    )
    .unwrap();
    let first = solve(&system, 1e-8).unwrap().bindings[0];
    let two_p = reference_binding(&p, 1).unwrap().binding;
    let one_s = reference_binding(&p.flipped(), 0).unwrap().binding;
    let removed = rel(first, two_p) < 1e-3 && rel(first, one_s) > 0.1;
    let stretch = if worst <= 3e-8 { "met" } else { "not met" };
    outcome(
        spurious == 0 && matched == 24 && worst <= 1e-6 && removed,
        format!(
            "Z=12: {matched}/24 levels matched, {spurious} spurious, worst rel error {worst:.2e} (3e-8 stretch {stretch}); Z=92 kappa=+1 first {first:.6} vs 2p1/2 {two_p:.6}, 1s1/2 {one_s:.6}"
        ),
    )
}

fn random_config(rng: &mut ChaCha8Rng) -> (OperatorParams<f64>, Mesh<f64>, PotentialModel<f64>) {
    let z = rng.gen_range(1..=90) as f64;
    let abs_kappa = rng.gen_range(1..=3);
    let kappa = if rng.gen_bool(0.5) {
        abs_kappa
    } else {
        -abs_kappa
    };
    let n = rng.gen_range(3..25);
    let a = 10f64.powf(rng.gen_range(-6.0..-2.0));
    let b = rng.gen_range(1.0..80.0) / z.sqrt();
    let mesh = Mesh::exponential(a, b, n, rng.gen_range(0.5..14.0)).unwrap();
    let pot = if rng.gen_bool(0.5) {
        PotentialModel::point(z)
    } else {
        PotentialModel::extended(z, a * rng.gen_range(1.0..50.0)).unwrap()
    };
    (params(z, kappa), mesh, pot)
}

fn c6_scheme_nesting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (p, mesh, pot) = random_config(&mut rng);
        let free = rng.gen_bool(0.3);
        let galerkin = assemble_hermite_galerkin(&p, &mesh, &pot, free).unwrap();
        let supg =
            assemble_supg(&p, &mesh, &pot, &StabilizationProfile::zeros(&mesh), free).unwrap();
        for (x, y) in [(&supg.lhs, &galerkin.lhs), (&supg.rhs, &galerkin.rhs)] {
            worst = worst.max((x - y).amax());
        }
    }
    outcome(
        worst <= 1e-14,
        format!("20 random configurations, max entry difference {worst:.2e}"),
    )
}

fn c7_tau_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 1000 {
        let h1: f64 = 10f64.powf(rng.gen_range(-5.0..0.0));
        let h2: f64 = 10f64.powf(rng.gen_range(-5.0..0.0));
        if h1 == h2 {
            continue;
        }
        let tau = stability_parameter(h1, h2);
        let scale = 81.0 / 4900.0 * h2 * h2;
        worst = worst.max(tau_balance_residual(h1, h2, tau).abs() / scale);
        pairs += 1;
    }
    let (h1, h2) = (0.01, 0.02);
    let tau = stability_parameter(h1, h2);
    let mut gaps = Vec::new();
    let mut ordered = true;
    for c in [1e3, 1e4, 1e5] {
        let with = tau_limit_lambda(h1, h2, tau, c).unwrap().relative_gap(c);
        let without = tau_limit_lambda(h1, h2, 0.0, c).unwrap().relative_gap(c);
        ordered &= with < without;
        gaps.push(format!("c={c:.0e}: {with:.3} < {without:.3}"));
    }
    outcome(
        worst <= 1e-14 && ordered,
        format!(
            "1000 pairs, worst balance residual {worst:.2e}; |lambda1-c^2|/c^2 {}",
            gaps.join(", ")
        ),
    )
}

fn c8_interpolation_order() -> Outcome {
    let sizes: Vec<f64> = (0..5).map(|i| PI / 8.0 / 2f64.powi(i)).collect();
    let study = hermite_interpolation_error_order(f64::sin, f64::cos, 0.0, PI, &sizes).unwrap();
    let order = study.order.unwrap_or(f64::NAN);
    outcome(order >= 3.8, format!("observed order {order:.3}"))
}

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax() / m.amax()
}

fn c9_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut symmetry: f64 = 0.0;
    let mut antisymmetry: f64 = 0.0;
    let mut unity: f64 = 0.0;
    let mut jump: f64 = 0.0;
    let mut residual: f64 = 0.0;
    let mut definite = true;
    for _ in 0..12 {
        let (p, mesh, pot) = random_config(&mut rng);
        let n = mesh.interior_count();
        for system in [
            assemble_linear_galerkin(&p, &mesh, &pot).unwrap(),
            assemble_hermite_galerkin(&p, &mesh, &pot, false).unwrap(),
        ] {
            symmetry = symmetry
                .max(asymmetry(&system.lhs))
                .max(asymmetry(&system.rhs));
            definite &= system.rhs.clone().cholesky().is_some();
        }
        let layout = DofLayout::new(BasisKind::CubicHermite, n, rng.gen_bool(0.5));
        let m010 = assemble_block(BlockMatrixSpec::M010, &mesh, &layout, &pot, None).unwrap();
        antisymmetry = antisymmetry.max((&m010 + m010.transpose()).amax() / m010.amax());

        let hats = BasisFamily::linear(&mesh);
        let herm = BasisFamily::hermite(&mesh);
        for _ in 0..10 {
            let x = rng.gen_range(mesh.node(1)..mesh.node(n));
            let s1: f64 = (1..=n).map(|j| hats.eval_hat(j, x, 0).unwrap()).sum();
            let s2: f64 = (1..=n)
                .map(|j| herm.eval_hermite(j, HermitePart::Value, x, 0).unwrap())
                .sum();
            unity = unity.max((s1 - 1.0).abs()).max((s2 - 1.0).abs());
        }
        let values: Vec<f64> = (0..n + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let slopes: Vec<f64> = (0..n + 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let interp = HermiteInterpolant::new(&mesh, values, slopes).unwrap();
        for k in 1..=n {
            let (l, r) = (interp.eval_local(k, 1.0), interp.eval_local(k + 1, 0.0));
            jump = jump.max((l.value - r.value).abs()).max((l.d1 - r.d1).abs());
        }

        let system = assemble(Scheme::HermiteSupg, &p, &mesh, &pot, false).unwrap();
        let options = SolverOptions {
            eigenvectors: true,
            ..SolverOptions::default()
        };
        if let Ok(spectrum) = solve_with(&system, &options) {
            for i in 0..spectrum.bindings.len() {
                let x = spectrum.eigenvector(i).unwrap();
                let lambda = spectrum.lambda(i);
                let r = &system.lhs * x - (&system.rhs * x) * lambda;
                let scale = (system.lhs.amax() + lambda.abs() * system.rhs.amax()) * x.amax();
                residual = residual.max(r.amax() / scale);
            }
        }
    }
    let pass = symmetry <= 1e-14
        && definite
        && antisymmetry <= 1e-12
        && unity <= 1e-13
        && jump <= 1e-12
        && residual <= 1e-8;
    outcome(
        pass,
        format!(
            "12 random meshes: asymmetry {symmetry:.1e}, rhs definite {definite}, M010 antisymmetry {antisymmetry:.1e}, partition of unity {unity:.1e}, C1 jump {jump:.1e}, eigen residual {residual:.1e}"
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

/// Runs without the test harness so every criterion line is printed.
fn main() {
    let criteria: [Criterion; 9] = [
        ("reference formula fidelity", c1_reference_formula),
        ("element integral oracle", c2_element_integrals),
        ("linear Galerkin pathology", c3_linear_pathology),
        ("Hermite Galerkin partial cure", c4_hermite_partial_cure),
        ("SUPG full cure", c5_supg_full_cure),
        ("scheme nesting", c6_scheme_nesting),
        ("tau identity", c7_tau_identity),
        ("interpolation order", c8_interpolation_order),
        ("property suites", c9_properties),
    ];
    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|&(_, run)| s.spawn(run)).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = Vec::new();
    for (i, ((name, _), o)) in criteria.iter().zip(&outcomes).enumerate() {
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}: {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!(
        "criterion 10 EXCLUDED: unconverged table digits and extended-nucleus absolute values are not reproducible without the original meshes"
    );
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
