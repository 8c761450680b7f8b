//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! The process exits nonzero when any criterion fails, except for a
//! failure that matches a deviation listed in `KNOWN_DEVIATIONS` exactly.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use galhull::commands::{self, build_algebra};
use galhull::config::Job;
use galhull::{reference, table1};
use galhull_core::algebra::{AffineAlgebra, MvPoly};
use galhull_core::codes::{ConstacyclicCode, RingConstacyclicCode};
use galhull_core::gf::{Fe, Field};
use galhull_core::hulldim::{
    dimension_spectrum, dimension_spectrum_exhaustive, generator_from_exponents, hull_dimension_formula, lcd_criterion,
    ring_factorizations, Exponents,
};
use galhull_core::matrix::{galois_dual_matrix, intersect, row_space_equal, GeneratorMatrix};
use galhull_core::num;
use galhull_core::polyring::{factor, Poly};
use galhull_core::quantum::{gray_image, GrayMatrix};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Criterion 4, row 12: the listed generators give hull dimension 3.
const KNOWN_DEVIATIONS: [(usize, &str); 1] = [(4, "row 12 eaqecc: expected [[40,35,3;1]]_25†, got [[40,34,3;0]]_25†")];

const PUBLISHED_F2: [&str; 6] = [
    "x_1^4 x_2^3 + x_1^3 x_2^3 + x_1^4 x_2 + x_1^2 x_2^3 + x_1^4 + x_1^3 x_2 + x_1^3 + x_1^2 x_2 + x_2^3 + x_1^2 + x_2 + 1",
    "x_1^4 x_2^3 + x_1^3 x_2^3 + x_1^4 x_2 + x_1^2 x_2^3 + x_1^3 x_2 + x_1^2 x_2 + x_2^3 + x_2",
    "x_1^4 x_2^3 + x_1^3 x_2^3 + x_1^4 x_2 + x_1^2 x_2^3 + x_1^4 + x_1^3 x_2 + x_1^3 + x_1^2 x_2 + x_1^2",
    "x_1^4 x_2^3 + x_1^3 x_2^3 + x_1^3 x_2^2 + x_1^2 x_2^3 + x_1^3 x_2 + x_1^2 x_2 + x_1x_2 + x_2^2",
    "x_1^4 x_2^3 + x_1^4 x_2^2 + x_1^3 x_2^3 + x_1^2 x_2^3 + x_1^2 x_2 + x_1 x_2^2 + x_1 x_2 + x_2",
    "x_1^4 x_2^3 + x_1^4 x_2^2 + x_1^3 x_2^3 + x_1^4 x_2 + x_1^3 x_2^2 + x_1^2 x_2^3 + x_1^2 x_2 + x_1 x_2^2 + x_2^2 + x_2",
];

const GF4: &str = r#""field": {"p": 2, "e": 2, "modulus": [1, 1, 1]}, "algebra": {"t": ["(w,1,1)", "(w,w,1)"]}"#;
const GF9: &str = r#""field": {"p": 3, "e": 2, "modulus": [2, 2, 1]}, "algebra": {"t": ["(w,1,1)", "(2,w^5,1)"]}"#;
const GF25: &str = r#""field": {"p": 5, "e": 2, "modulus": [2, 4, 1]}, "algebra": {"t": ["(w^13,1,1)", "(1,w^3,1)"]}"#;
const F2: &str = r#""field": {"p": 2, "e": 1, "modulus": [1, 1]}, "algebra": {"t": [[1, 0, 0, 0, 1, 1], [0, 1, 1, 0, 1]]}"#;

type Check = Result<String, String>;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn job(body: &str) -> Job {
    Job::parse(&format!("{{{body}}}"), None).expect("acceptance job is valid")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Setting {
    name: &'static str,
    job: Job,
    n: usize,
    k: u32,
    lambda: Vec<Fe>,
}

fn setting(name: &'static str, base: &str, n: usize, k: u32, lambda: &str) -> Setting {
    let job = job(&format!(r#"{base}, "code": {{"n": {n}, "k": {k}, "lambda": {lambda}}}"#));
    let lambda = job.code.as_ref().unwrap().lambda.clone();
    Setting { name, job, n, k, lambda }
}

fn below(rng: &mut ChaCha8Rng, m: u64) -> u64 {
    rng.next_u64() % m
}

/// `n - deg lcm(g, h^#)` with `h = (x^n - lambda) / g`.
fn lcm_hull(n: usize, lambda: Fe, g: &Poly, k: u32) -> Result<usize, String> {
    let h = Poly::binomial(g.field(), n, lambda).div_exact(g).map_err(err)?;
    let l = g.lcm(&h.sharp(k).map_err(err)?).map_err(err)?;
    Ok(n - l.deg0())
}

fn matrix_hull(g: &GeneratorMatrix, k: u32) -> Result<usize, String> {
    Ok(intersect(g, &galois_dual_matrix(g, k)).map_err(err)?.dim())
}

/// A random monic divisor of `x^n - lambda`.
fn random_divisor(rng: &mut ChaCha8Rng, field: &Arc<Field>, n: usize, lambda: Fe) -> Poly {
    let fac = factor(&Poly::binomial(field, n, lambda)).expect("binomial factors");
    fac.factors
        .iter()
        .fold(Poly::one(field), |acc, (p, m)| &acc * &p.pow(below(rng, *m as u64 + 1)))
}

/// Units whose order divides `1 + p^(e-k)`.
fn admissible_units(f: &Field, k: u32) -> Vec<Fe> {
    let bound = 1 + (f.p() as u64).pow(f.e() - k);
    f.elements().filter(|&a| !a.is_zero() && bound.is_multiple_of(f.element_order(a).unwrap())).collect()
}

fn c1_idempotents() -> Check {
    let j = Job::load(&data("configs/f2_decompose.json")).map_err(err)?;
    let alg = build_algebra(&j).map_err(err)?;
    let published: Vec<MvPoly> =
        PUBLISHED_F2.iter().map(|s| MvPoly::parse(&j.field, 2, s)).collect::<Result<_, _>>().map_err(err)?;
    let computed: Vec<&MvPoly> = alg.classes().iter().map(|c| &c.idempotent).collect();
    ensure(computed.len() == 6, || format!("{} classes instead of 6", computed.len()))?;
    for (i, p) in published.iter().enumerate() {
        ensure(computed.contains(&p), || format!("published idempotent {} not computed", i + 1))?;
    }
    Ok("all six published idempotents computed, no others".into())
}

fn example(cfg: &str, hull: u64, classical: &str, eaqecc: &str, gap: i64) -> Check {
    let j = Job::load(&data(cfg)).map_err(err)?;
    let h = commands::hull(&j).map_err(err)?;
    ensure(h.formula == hull && h.oracle as u64 == hull, || {
        format!("hull formula {} oracle {}, expected {hull}", h.formula, h.oracle)
    })?;
    let reference = reference::bundled();
    let e = commands::eaqecc(&j, &reference).map_err(err)?;
    ensure(e.classical == classical, || format!("Gray image {} != {classical}", e.classical))?;
    ensure(e.eaqecc == eaqecc, || format!("EAQECC {} != {eaqecc}", e.eaqecc))?;
    ensure(e.gap == gap, || format!("gap {} != {gap}", e.gap))?;
    Ok(format!("hull {hull} by formula and oracle, {classical}, {eaqecc}, gap {gap}"))
}

fn c4_table1() -> Check {
    let r = table1::reproduce(&table1::golden(), &reference::bundled(), None).map_err(err)?;
    if r.mismatches.is_empty() {
        Ok(format!("{} rows match", r.rows.len()))
    } else {
        Err(r.mismatches.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("; "))
    }
}

fn c5_formula_vs_oracle() -> Check {
    let settings = [
        setting("GF(9) n=7", GF9, 7, 1, r#"[1, "w^2"]"#),
        setting("GF(25) n=13", GF25, 13, 1, r#"[1, "w^8"]"#),
        setting("GF(9) n=6", GF9, 6, 1, "[1, 1]"),
        setting("GF(9) n=9", GF9, 9, 1, "[1, 1]"),
        setting("GF(4) n=5", GF4, 5, 1, r#"["w", 1]"#),
        setting("GF(25) n=20", GF25, 20, 1, r#"["w^8", 1]"#),
        setting("GF(2) n=7", F2, 7, 0, "[1, 1, 1, 1, 1, 1]"),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let per_setting = 40;
    let mut patterns = 0;
    let mut with_repeated_roots = 0;
    for s in &settings {
        let facts = ring_factorizations(&s.job.field, s.n, &s.lambda, s.k).map_err(|e| format!("{}: {e}", s.name))?;
        if facts.iter().any(|f| f.e_prime > 0) {
            with_repeated_roots += 1;
        }
        for _ in 0..per_setting {
            let exps: Vec<Exponents> = facts
                .iter()
                .map(|f| {
                    f.orbits()
                        .map(|(_, o)| (0..o.size()).map(|_| below(&mut rng, f.multiplicity as u64 + 1) as u32).collect())
                        .collect()
                })
                .collect();
            let formula = hull_dimension_formula(&facts, &exps).map_err(|e| format!("{}: {e}", s.name))?;
            for (c, (f, u)) in facts.iter().zip(&exps).enumerate() {
                let g = generator_from_exponents(f, u).map_err(err)?;
                let by_lcm = lcm_hull(s.n, f.lambda, &g, s.k)?;
                let code = ConstacyclicCode::new(s.n, f.lambda, &g, s.k).map_err(err)?;
                let by_matrix = matrix_hull(&code.generator_matrix(), s.k)?;
                let by_formula = formula.per_class[c].dimension;
                ensure(by_formula == by_lcm as u64 && by_lcm == by_matrix, || {
                    format!(
                        "{} class {} exponents {u:?}: formula {by_formula}, lcm {by_lcm}, matrix {by_matrix}",
                        s.name,
                        c + 1
                    )
                })?;
            }
            patterns += 1;
        }
    }
    ensure(with_repeated_roots > 0, || "no setting with p | n".into())?;
    Ok(format!(
        "{patterns} patterns over {} settings ({with_repeated_roots} with p | n), three routes agree",
        settings.len()
    ))
}

fn spectrum_size(s: &Setting) -> Result<(usize, usize), String> {
    let facts = ring_factorizations(&s.job.field, s.n, &s.lambda, s.k).map_err(err)?;
    let exhaustive = dimension_spectrum_exhaustive(&facts, 10_000_000).map_err(err)?;
    let formula = dimension_spectrum(&facts, 10_000_000).map_err(err)?;
    ensure(exhaustive == formula, || format!("{}: formula spectrum differs from enumeration", s.name))?;
    let classes = build_algebra(&s.job).map_err(err)?.class_count();
    Ok((exhaustive.len(), classes))
}

fn c6_spectrum() -> Check {
    let mut lines = Vec::new();
    for n in [3, 9] {
        let s = setting("GF(9)", GF9, n, 1, "[1, 1]");
        let (size, classes) = spectrum_size(&s)?;
        let want = classes * (n - 1) / 2 + 1;
        ensure(size == want, || format!("q=9 n={n}: |D| = {size}, expected {want}"))?;
        lines.push(format!("q=9 n={n}: {size}"));
    }
    for n in [2, 6, 12] {
        let s = setting("GF(4)", GF4, n, 1, "[1, 1]");
        let (n_prime, _) = num::split_p_part(n as u64, 2);
        ensure(3 % n_prime == 0, || format!("n={n} outside the hypothesis"))?;
        let (size, classes) = spectrum_size(&s)?;
        let want = classes * n / 2 + 1;
        ensure(size == want, || format!("q=4 k=1 n={n}: |D| = {size}, expected {want}"))?;
        lines.push(format!("q=4 n={n}: {size}"));
    }
    Ok(lines.join(", "))
}

struct GraySetting {
    base: &'static str,
    k: u32,
    gray: &'static str,
    lengths: &'static [usize],
}

fn c7_duality() -> Check {
    let settings = [
        GraySetting { base: GF9, k: 1, gray: r#"{"matrix": [["w", "w^3"], ["w^7", "w^5"]]}"#, lengths: &[1, 2, 3, 4, 5, 6, 7, 8] },
        GraySetting { base: GF25, k: 1, gray: r#"{"matrix": [["w", "w^2"], [2, "w^13"]]}"#, lengths: &[2, 3, 4, 5, 6] },
        GraySetting { base: GF4, k: 1, gray: r#"{"matrix": [["w", 0], [0, "w^2"]]}"#, lengths: &[2, 3, 4, 5, 6, 7] },
        GraySetting { base: F2, k: 0, gray: r#"{"identity": true}"#, lengths: &[1, 3, 5, 7] },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let total = 500;
    for i in 0..total {
        let s = &settings[i % settings.len()];
        let j = job(&format!(r#"{}, "gray": {}"#, s.base, s.gray));
        let f = j.field.clone();
        let alg: Arc<AffineAlgebra> = build_algebra(&j).map_err(err)?;
        let n = s.lengths[below(&mut rng, s.lengths.len() as u64) as usize];
        let units = admissible_units(&f, s.k);
        let lambda: Vec<Fe> =
            (0..alg.class_count()).map(|_| units[below(&mut rng, units.len() as u64) as usize]).collect();
        let gens: Vec<Poly> = lambda.iter().map(|&l| random_divisor(&mut rng, &f, n, l)).collect();
        let lam = alg.recompose(&lambda).map_err(err)?;
        let code = RingConstacyclicCode::new(&alg, n, &lam, &gens, s.k).map_err(err)?;
        let m = match j.gray.as_ref().unwrap() {
            galhull::config::GraySpec::Matrix(rows) => GrayMatrix::new(&f, rows, s.k).map_err(err)?,
            galhull::config::GraySpec::Identity => GrayMatrix::identity(&f, alg.class_count(), s.k),
        };
        let dual = code.ring_dual().map_err(err)?;
        for (c, d) in code.components().iter().zip(dual.components()) {
            ensure(c.dim() + d.dim() == n, || format!("code {i}: component dims {} + {} != {n}", c.dim(), d.dim()))?;
        }
        let image = gray_image(&code, &m).map_err(err)?;
        let image_dual = galois_dual_matrix(&image, s.k);
        let nn = n * alg.class_count();
        ensure(image.dim() + image_dual.dim() == nn, || format!("code {i}: image dims do not add up to {nn}"))?;
        ensure(row_space_equal(&gray_image(&dual, &m).map_err(err)?, &image_dual).map_err(err)?, || {
            format!("code {i}: psi(C^perp) != psi(C)^perp")
        })?;
        let hull_image = gray_image(&code.ring_hull().map_err(err)?.hull, &m).map_err(err)?;
        let image_hull = intersect(&image, &image_dual).map_err(err)?;
        ensure(row_space_equal(&hull_image, &image_hull).map_err(err)?, || {
            format!("code {i}: psi(hull C) != hull psi(C) (n={n}, field {})", f)
        })?;
    }
    Ok(format!("{total} random ring codes over 4 algebras, zero failures"))
}

fn c8_lcd() -> Check {
    let lcd_instances = [
        setting("GF(9) n=7 (1,w^2)", GF9, 7, 1, r#"[1, "w^2"]"#),
        setting("GF(9) n=14 (1,1)", GF9, 14, 1, "[1, 1]"),
        setting("GF(4) n=3 (1,1)", GF4, 3, 1, "[1, 1]"),
        setting("GF(4) n=11 (w,1)", GF4, 11, 1, r#"["w", 1]"#),
        setting("GF(25) n=7 (1,w^8)", GF25, 7, 1, r#"[1, "w^8"]"#),
    ];
    let other_instances = [
        setting("GF(9) n=4 (1,1)", GF9, 4, 1, "[1, 1]"),
        setting("GF(9) n=5 (1,1)", GF9, 5, 1, "[1, 1]"),
        setting("GF(9) n=8 (1,w^2)", GF9, 8, 1, r#"[1, "w^2"]"#),
        setting("GF(25) n=20 (w^8,1)", GF25, 20, 1, r#"["w^8", 1]"#),
        setting("GF(4) n=5 (w,1)", GF4, 5, 1, r#"["w", 1]"#),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut congruence_checks = 0;
    for (certified, group) in [(true, &lcd_instances), (false, &other_instances)] {
        for s in group.iter() {
            let cert = lcd_criterion(&s.job.field, s.n, &s.lambda, s.k).unwrap_or(false);
            if certified {
                ensure(cert, || format!("{}: expected the criterion to certify LCD", s.name))?;
            }
            for _ in 0..50 {
                let mut hull = 0;
                for &l in &s.lambda {
                    let g = random_divisor(&mut rng, &s.job.field, s.n, l);
                    let c = ConstacyclicCode::new(s.n, l, &g, s.k).map_err(err)?;
                    let gm = c.generator_matrix();
                    let by_matrix = matrix_hull(&gm, s.k)?;
                    ensure(c.hull_dimension().map_err(err)? == by_matrix, || format!("{}: hull routes differ", s.name))?;
                    hull += by_matrix;
                    let congruence = c.dual_containing_by_congruence().map_err(err)?;
                    let definition = galois_dual_matrix(&gm, s.k).is_subcode_of(&gm).map_err(err)?;
                    ensure(congruence == definition, || {
                        format!("{}: g = {} congruence {congruence}, definition {definition}", s.name, g.tuple())
                    })?;
                    congruence_checks += 1;
                }
                if cert {
                    ensure(hull == 0, || format!("{}: certified LCD but a sampled hull has dimension {hull}", s.name))?;
                }
            }
        }
    }
    Ok(format!(
        "{} certified instances x 50 codes all LCD; {congruence_checks} congruence checks agree",
        lcd_instances.len()
    ))
}

fn c9_determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_galhull");
    let runs: [Vec<String>; 3] = [
        vec!["factor".into(), "--config".into(), data("configs/factor_binomial.json").display().to_string()],
        vec!["factor".into(), "--config".into(), data("configs/factor_poly.json").display().to_string()],
        vec!["reproduce-table1".into()],
    ];
    for args in &runs {
        let mut outs = Vec::new();
        for _ in 0..2 {
            let o = Command::new(bin).args(args).arg("--seed-check").output().map_err(err)?;
            let stderr = String::from_utf8_lossy(&o.stderr).to_string();
            ensure(stderr.contains("seed-check: two runs produced identical output"), || {
                format!("{}: seed-check did not pass: {stderr}", args[0])
            })?;
            ensure(!o.stdout.is_empty(), || format!("{}: no output", args[0]))?;
            outs.push(o.stdout);
        }
        ensure(outs[0] == outs[1], || format!("{}: consecutive runs differ", args[0]))?;
    }
    Ok("factor (2 configs) and reproduce-table1 byte-identical across runs, --seed-check passes".into())
}

type Criterion = (usize, &'static str, Duration, fn() -> Check);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "idempotent reproduction", Duration::from_secs(1), c1_idempotents),
        (2, "example 2 end-to-end", Duration::from_secs(10), || {
            example("configs/example2.json", 0, "[14,10,4]_9", "[[14,10,4;4]]_9†", 2)
        }),
        (3, "example 3 end-to-end", Duration::from_secs(30), || {
            example("configs/example3.json", 2, "[26,22,4]_25", "[[26,20,4;2]]_25†", 2)
        }),
        (4, "table reproduction", Duration::from_secs(300), c4_table1),
        (5, "formula vs oracle", Duration::from_secs(120), c5_formula_vs_oracle),
        (6, "spectrum cardinality", Duration::from_secs(60), c6_spectrum),
        (7, "duality identities", Duration::MAX, c7_duality),
        (8, "LCD criterion soundness", Duration::MAX, c8_lcd),
        (9, "determinism", Duration::MAX, c9_determinism),
    ];
    let mut unexpected = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let mut result = run();
        let elapsed = start.elapsed();
        if result.is_ok() && elapsed > limit {
            result = Err(format!("took {:.2} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()));
        }
        match result {
            Ok(detail) => println!("criterion {id} ({name}): PASS [{:.2} s] {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                let known = KNOWN_DEVIATIONS.iter().any(|&(c, d)| c == id && d == detail);
                println!(
                    "criterion {id} ({name}): FAIL [{:.2} s] {detail}{}",
                    elapsed.as_secs_f64(),
                    if known { " (documented deviation)" } else { "" }
                );
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
