//! One function per subcommand. Each returns a serializable report; text
//! rendering lives in [`crate::report`].

use std::sync::Arc;

use galhull_core::algebra::{AffineAlgebra, MvPoly};
use galhull_core::codes::{Classification, ConstacyclicCode, RingConstacyclicCode};
use galhull_core::gf::{Fe, Field};
use galhull_core::hulldim::{
    dimension_spectrum, dimension_spectrum_exhaustive, exponents_from_generator, generator_from_exponents,
    hull_dimension_formula, ring_factorizations, Exponents, HullDimError,
};
use galhull_core::matrix::{galois_dual_matrix, intersect, DistanceStrategy};
use galhull_core::polyring::{constacyclic_factorization, factor, ConstacyclicFactorization, Poly};
use galhull_core::quantum::{eaqecc_from_code, gray_hull_check, gray_image, GrayMatrix, Label, ReferenceTable};
use serde::Serialize;

use crate::config::{Budgets, CodeSpec, FactorSpec, GeneratorSpec, GraySpec, Job};
use crate::error::{staged, AppError};

pub(crate) fn fe(f: &Field, a: Fe) -> String {
    f.display(a).to_string()
}

pub(crate) fn tuple(p: &Poly) -> String {
    p.tuple().to_string()
}

fn coords(f: &Field, c: &[Fe]) -> String {
    let parts: Vec<String> = c.iter().map(|&a| fe(f, a)).collect();
    format!("({})", parts.join(","))
}

/// `x_1^4 x_2^3 + w x_1 + 1` style, with subscripted variables.
pub fn subscripted(m: &MvPoly) -> String {
    if m.is_zero() {
        return "0".into();
    }
    let f = m.field();
    let terms: Vec<String> = m
        .sorted_terms()
        .into_iter()
        .map(|(exps, c)| {
            let vars: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| if a == 1 { format!("x_{}", i + 1) } else { format!("x_{}^{}", i + 1, a) })
                .collect();
            match (vars.is_empty(), c == f.one()) {
                (true, _) => fe(f, c),
                (false, true) => vars.join(" "),
                (false, false) => format!("{} {}", fe(f, c), vars.join(" ")),
            }
        })
        .collect();
    terms.join(" + ")
}

fn missing(section: &str) -> AppError {
    AppError::Config(vec![format!("/: this command needs a {section:?} section")])
}

pub fn build_algebra(job: &Job) -> Result<Arc<AffineAlgebra>, AppError> {
    let spec = job.algebra.as_ref().ok_or_else(|| missing("algebra"))?;
    let a = AffineAlgebra::with_limits(&job.field, spec.t.clone(), spec.limits).map_err(staged("algebra"))?;
    Ok(Arc::new(a))
}

fn code_spec(job: &Job) -> Result<&CodeSpec, AppError> {
    job.code.as_ref().ok_or_else(|| missing("code"))
}

/// A ring code together with the component factorizations when the
/// closed-form hypotheses hold.
pub struct Prepared {
    pub algebra: Arc<AffineAlgebra>,
    pub code: RingConstacyclicCode,
    pub facts: Result<Vec<ConstacyclicFactorization>, HullDimError>,
}

pub fn prepare(job: &Job) -> Result<Prepared, AppError> {
    let algebra = build_algebra(job)?;
    let spec = code_spec(job)?;
    let count = algebra.class_count();
    if spec.lambda.len() != count {
        return Err(AppError::Config(vec![format!(
            "/code/lambda: the algebra has {count} classes but lambda has {} coordinates",
            spec.lambda.len()
        )]));
    }
    let facts = ring_factorizations(&job.field, spec.n, &spec.lambda, spec.k);
    let generators = match spec.generators.as_ref().ok_or_else(|| missing("code/generators"))? {
        GeneratorSpec::Polys(g) => g.clone(),
        GeneratorSpec::Exponents(u) => {
            let facts = facts.as_ref().map_err(|e| staged("code")(e.clone()))?;
            facts
                .iter()
                .zip(u)
                .map(|(f, u)| generator_from_exponents(f, u))
                .collect::<Result<_, _>>()
                .map_err(staged("code"))?
        }
    };
    let lambda = algebra.recompose(&spec.lambda).map_err(staged("code"))?;
    let code = RingConstacyclicCode::new(&algebra, spec.n, &lambda, &generators, spec.k).map_err(staged("code"))?;
    Ok(Prepared { algebra, code, facts })
}

fn gray_matrix(job: &Job, algebra: &AffineAlgebra, k: u32) -> Result<GrayMatrix, AppError> {
    match job.gray.as_ref().ok_or_else(|| missing("gray"))? {
        GraySpec::Identity => Ok(GrayMatrix::identity(&job.field, algebra.class_count(), k)),
        GraySpec::Matrix(rows) => GrayMatrix::new(&job.field, rows, k).map_err(staged("gray")),
    }
}

// ---------------------------------------------------------------- decompose

#[derive(Debug, Clone, Serialize)]
pub struct ClassEntry {
    pub class: usize,
    pub size: usize,
    pub minimal_polynomials: Vec<String>,
    pub idempotent: String,
    pub construction_agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeReport {
    pub field: String,
    pub defining_polynomials: Vec<String>,
    pub dimension: usize,
    pub classes: Vec<ClassEntry>,
}

pub fn decompose(job: &Job) -> Result<DecomposeReport, AppError> {
    let alg = build_algebra(job)?;
    let mut classes = Vec::new();
    for (id, c) in alg.classes().iter().enumerate() {
        let built = alg.idempotent_via_construction(id).map_err(staged("decompose"))?;
        let agrees = &built == c.residue();
        if !agrees {
            return Err(AppError::failure("decompose", format!("class {}: constructed idempotent differs", id + 1)));
        }
        classes.push(ClassEntry {
            class: id + 1,
            size: c.class_size,
            minimal_polynomials: c.p_polys.iter().map(|p| p.to_string()).collect(),
            idempotent: subscripted(&c.idempotent),
            construction_agrees: agrees,
        });
    }
    Ok(DecomposeReport {
        field: job.field.to_string(),
        defining_polynomials: alg.defining_polys().iter().map(tuple).collect(),
        dimension: alg.dim(),
        classes,
    })
}

// ------------------------------------------------------------------- factor

#[derive(Debug, Clone, Serialize)]
pub struct FactorEntry {
    pub factor: String,
    pub tuple: String,
    pub degree: usize,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitClassEntry {
    pub t: usize,
    pub a: u32,
    pub j: u64,
    pub ord_j: u64,
    pub beta: u64,
    pub orbits: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorReport {
    Polynomial { input: String, unit: String, factors: Vec<FactorEntry> },
    Binomial {
        n: usize,
        lambda: String,
        k: u32,
        n_prime: usize,
        e_prime: u32,
        multiplicity: u32,
        r: u64,
        l: u32,
        divisors: Vec<u32>,
        classes: Vec<OrbitClassEntry>,
    },
}

pub fn factor_cmd(job: &Job) -> Result<FactorReport, AppError> {
    let f = &job.field;
    match job.factor.as_ref().ok_or_else(|| missing("factor"))? {
        FactorSpec::Poly(p) => {
            let fac = factor(p).map_err(staged("factor"))?;
            Ok(FactorReport::Polynomial {
                input: tuple(p),
                unit: fe(f, fac.unit),
                factors: fac
                    .factors
                    .iter()
                    .map(|(g, m)| FactorEntry { factor: g.to_string(), tuple: tuple(g), degree: g.deg0(), multiplicity: *m })
                    .collect(),
            })
        }
        &FactorSpec::Binomial { n, lambda, k } => {
            let fac = constacyclic_factorization(f, n, lambda, k).map_err(staged("factor"))?;
            Ok(FactorReport::Binomial {
                n,
                lambda: fe(f, lambda),
                k,
                n_prime: fac.n_prime,
                e_prime: fac.e_prime,
                multiplicity: fac.multiplicity,
                r: fac.r,
                l: fac.l,
                divisors: fac.divisors.clone(),
                classes: fac
                    .classes
                    .iter()
                    .map(|c| OrbitClassEntry {
                        t: c.t,
                        a: c.a,
                        j: c.j,
                        ord_j: c.ord_j,
                        beta: c.beta,
                        orbits: c.orbits.iter().map(|o| o.members.iter().map(tuple).collect()).collect(),
                    })
                    .collect(),
            })
        }
    }
}

// --------------------------------------------------------------------- hull

#[derive(Debug, Clone, Serialize)]
pub struct HullRow {
    pub t: usize,
    pub a: u32,
    pub j: u64,
    pub beta: u64,
    pub ord_j: u64,
    pub b: u64,
    pub contribution: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentEntry {
    pub class: usize,
    pub lambda: String,
    pub generator: String,
    pub dimension: usize,
    pub exponents: Exponents,
    pub formula: u64,
    pub lcm_route: usize,
    pub matrix_route: usize,
    pub rows: Vec<HullRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HullCmdReport {
    pub n: usize,
    pub k: u32,
    pub lambda: String,
    pub q_dimension: usize,
    pub dual_q_dimension: usize,
    pub components: Vec<ComponentEntry>,
    pub formula: u64,
    pub oracle: usize,
}

fn matrix_hull(c: &ConstacyclicCode) -> Result<usize, AppError> {
    let g = c.generator_matrix();
    let dual = galois_dual_matrix(&g, c.k());
    Ok(intersect(&g, &dual).map_err(staged("hull"))?.dim())
}

pub fn hull(job: &Job) -> Result<HullCmdReport, AppError> {
    let prep = prepare(job)?;
    let spec = code_spec(job)?;
    let f = &job.field;
    let facts = prep.facts.map_err(staged("hull"))?;
    let comps = prep.code.components();
    let exps: Vec<Exponents> = facts
        .iter()
        .zip(comps)
        .map(|(fa, c)| exponents_from_generator(fa, c.generator()))
        .collect::<Result<_, _>>()
        .map_err(staged("hull"))?;
    let formula = hull_dimension_formula(&facts, &exps).map_err(staged("hull"))?;
    let mut components = Vec::new();
    let mut oracle = 0;
    for (s, (c, u)) in comps.iter().zip(exps).enumerate() {
        let lcm_route = c.hull_dimension().map_err(staged("hull"))?;
        let matrix_route = matrix_hull(c)?;
        let per = &formula.per_class[s];
        if per.dimension != lcm_route as u64 || lcm_route != matrix_route {
            return Err(AppError::failure(
                "hull",
                format!(
                    "class {}: formula {} disagrees with oracle (lcm {}, matrix {})",
                    s + 1,
                    per.dimension,
                    lcm_route,
                    matrix_route
                ),
            ));
        }
        oracle += matrix_route;
        components.push(ComponentEntry {
            class: s + 1,
            lambda: fe(f, c.lambda()),
            generator: tuple(c.generator()),
            dimension: c.dim(),
            exponents: u,
            formula: per.dimension,
            lcm_route,
            matrix_route,
            rows: per
                .rows
                .iter()
                .map(|r| HullRow { t: r.t, a: r.a, j: r.j, beta: r.beta, ord_j: r.ord_j, b: r.b, contribution: r.contribution })
                .collect(),
        });
    }
    if formula.total != oracle as u64 {
        return Err(AppError::failure("hull", format!("formula total {} != oracle total {oracle}", formula.total)));
    }
    let dual = prep.code.ring_dual().map_err(staged("hull"))?;
    Ok(HullCmdReport {
        n: spec.n,
        k: spec.k,
        lambda: coords(f, &spec.lambda),
        q_dimension: prep.code.q_dimension(),
        dual_q_dimension: dual.q_dimension(),
        components,
        formula: formula.total,
        oracle,
    })
}

// ----------------------------------------------------------------- classify

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Flags {
    pub self_dual: bool,
    pub dual_containing: bool,
    pub self_orthogonal: bool,
    pub lcd: bool,
}

impl From<Classification> for Flags {
    fn from(c: Classification) -> Flags {
        Flags { self_dual: c.self_dual, dual_containing: c.dual_containing, self_orthogonal: c.self_orthogonal, lcd: c.lcd }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyComponent {
    pub class: usize,
    pub generator: String,
    pub flags: Flags,
    pub congruence_dual_containing: bool,
    pub matrix_dual_containing: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    pub n: usize,
    pub k: u32,
    pub lambda: String,
    pub flags: Flags,
    pub components: Vec<ClassifyComponent>,
}

pub fn classify(job: &Job) -> Result<ClassifyReport, AppError> {
    let prep = prepare(job)?;
    let spec = code_spec(job)?;
    let flags = prep.code.classify().map_err(staged("classify"))?.into();
    let mut components = Vec::new();
    for (s, c) in prep.code.components().iter().enumerate() {
        let congruence = c.dual_containing_by_congruence().map_err(staged("classify"))?;
        let g = c.generator_matrix();
        let matrix = galois_dual_matrix(&g, c.k()).is_subcode_of(&g).map_err(staged("classify"))?;
        if congruence != matrix {
            return Err(AppError::failure(
                "classify",
                format!("class {}: congruence test says {congruence}, definition says {matrix}", s + 1),
            ));
        }
        components.push(ClassifyComponent {
            class: s + 1,
            generator: tuple(c.generator()),
            flags: c.classify().map_err(staged("classify"))?.into(),
            congruence_dual_containing: congruence,
            matrix_dual_containing: matrix,
        });
    }
    Ok(ClassifyReport { n: spec.n, k: spec.k, lambda: coords(&job.field, &spec.lambda), flags, components })
}

// ----------------------------------------------------------------- spectrum

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub n: usize,
    pub k: u32,
    pub lambda: String,
    pub classes: usize,
    pub dimensions: Vec<u64>,
    pub size: usize,
    /// `None` when the divisor enumeration exceeds the budget.
    pub exhaustive: Option<Vec<u64>>,
}

pub fn spectrum(job: &Job) -> Result<SpectrumReport, AppError> {
    let spec = code_spec(job)?;
    let facts = ring_factorizations(&job.field, spec.n, &spec.lambda, spec.k).map_err(staged("spectrum"))?;
    spectrum_of(&job.field, spec, &facts, job.budgets)
}

pub fn spectrum_of(
    field: &Field,
    spec: &CodeSpec,
    facts: &[ConstacyclicFactorization],
    budgets: Budgets,
) -> Result<SpectrumReport, AppError> {
    let set = dimension_spectrum(facts, budgets.spectrum).map_err(staged("spectrum"))?;
    let exhaustive = match dimension_spectrum_exhaustive(facts, budgets.spectrum) {
        Ok(s) => Some(s),
        Err(HullDimError::SearchSpaceTooLarge { .. }) => None,
        Err(e) => return Err(staged("spectrum")(e)),
    };
    if let Some(ex) = &exhaustive {
        if *ex != set {
            return Err(AppError::failure("spectrum", "formula spectrum differs from divisor enumeration"));
        }
    }
    Ok(SpectrumReport {
        n: spec.n,
        k: spec.k,
        lambda: coords(field, &spec.lambda),
        classes: facts.len(),
        size: set.len(),
        dimensions: set.into_iter().collect(),
        exhaustive: exhaustive.map(|s| s.into_iter().collect()),
    })
}

// --------------------------------------------------------------------- gray

#[derive(Debug, Clone, Serialize)]
pub struct GrayReport {
    pub gamma: String,
    pub length: usize,
    pub dimension: usize,
    pub dual_dimension: usize,
    pub hull_dimension: usize,
    pub generator_rows: Vec<String>,
}

pub fn gray(job: &Job) -> Result<GrayReport, AppError> {
    let prep = prepare(job)?;
    let m = gray_matrix(job, &prep.algebra, prep.code.k())?;
    let check = gray_hull_check(&prep.code, &m).map_err(staged("gray"))?;
    let image = gray_image(&prep.code, &m).map_err(staged("gray"))?;
    let f = &job.field;
    Ok(GrayReport {
        gamma: fe(f, m.gamma()),
        length: image.len(),
        dimension: image.dim(),
        dual_dimension: check.dual_dim,
        hull_dimension: check.hull_dim,
        generator_rows: image.matrix().to_rows().iter().map(|r| coords(f, r)).collect(),
    })
}

// ------------------------------------------------------------------- eaqecc

#[derive(Debug, Clone, Serialize)]
pub struct EaqeccCmdReport {
    pub classical: String,
    pub eaqecc: String,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub c: usize,
    pub hull_dimension: usize,
    pub gap: i64,
    pub labels: Vec<String>,
    pub bound_hypothesis: bool,
    pub distance_strategy: String,
}

pub fn strategy_name(s: DistanceStrategy) -> &'static str {
    match s {
        DistanceStrategy::Auto => "auto",
        DistanceStrategy::Enumerate => "enumerate",
        DistanceStrategy::ColumnSearch => "column",
        DistanceStrategy::Both => "both",
    }
}

pub fn eaqecc(job: &Job, reference: &ReferenceTable) -> Result<EaqeccCmdReport, AppError> {
    let prep = prepare(job)?;
    let m = gray_matrix(job, &prep.algebra, prep.code.k())?;
    let r = eaqecc_from_code(&prep.code, &m, job.budgets.search, job.budgets.strategy, Some(reference))
        .map_err(staged("eaqecc"))?;
    let p = &r.params;
    let labels = [Label::Mds, Label::NearMds, Label::Optimal, Label::NearOptimal]
        .into_iter()
        .filter(|&l| p.flags.has(l))
        .map(|l| l.to_string())
        .collect();
    Ok(EaqeccCmdReport {
        classical: format!("[{},{},{}]_{}", p.n, p.classical_k, p.d, p.q),
        eaqecc: p.to_string(),
        n: p.n,
        k: p.k,
        d: p.d,
        c: p.c,
        hull_dimension: p.hull_dim,
        gap: p.gap,
        labels,
        bound_hypothesis: p.bound_hypothesis,
        distance_strategy: strategy_name(p.distance.strategy).into(),
    })
}
