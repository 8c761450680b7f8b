//! Job documents: a single JSON object describing a field, an algebra, a
//! code, a Gray matrix and search budgets.
//!
//! Field elements are written as an integer of the prime subfield, a power
//! of the primitive element such as `"w^5"`, or a coordinate array over the
//! prime field (constant first). Polynomials are coefficient tuples,
//! constant first, either as a JSON array or as a string like
//! `"(2,w^5,w^3,1)"`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use galhull_core::algebra::AlgebraLimits;
use galhull_core::gf::{Fe, Field};
use galhull_core::hulldim::Exponents;
use galhull_core::matrix::{DistanceStrategy, SearchBudget};
use galhull_core::polyring::Poly;
use serde::Deserialize;
use serde_json::Value;

use crate::error::AppError;
use crate::schema;

#[derive(Deserialize)]
#[serde(untagged)]
enum RawElement {
    Int(u64),
    Text(String),
    Coords(Vec<u32>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPoly {
    Text(String),
    Coeffs(Vec<RawElement>),
}

#[derive(Deserialize)]
struct RawField {
    p: u32,
    e: u32,
    modulus: Vec<u32>,
    label: Option<String>,
}

#[derive(Deserialize)]
struct RawAlgebra {
    t: Vec<RawPoly>,
    max_vars: Option<usize>,
    max_dim: Option<usize>,
}

#[derive(Deserialize)]
struct RawCode {
    n: usize,
    k: Option<u32>,
    lambda: Vec<RawElement>,
    generators: Option<Vec<RawPoly>>,
    exponents: Option<Vec<Exponents>>,
}

#[derive(Deserialize)]
struct RawGray {
    matrix: Option<Vec<Vec<RawElement>>>,
    identity: Option<bool>,
}

#[derive(Deserialize)]
struct RawBudgets {
    codewords: Option<u64>,
    subsets: Option<u64>,
    spectrum: Option<u64>,
    strategy: Option<String>,
}

#[derive(Deserialize)]
struct RawFactor {
    poly: Option<RawPoly>,
    n: Option<usize>,
    lambda: Option<RawElement>,
    k: Option<u32>,
}

#[derive(Deserialize)]
struct RawJob {
    name: Option<String>,
    field: RawField,
    algebra: Option<RawAlgebra>,
    code: Option<RawCode>,
    gray: Option<RawGray>,
    budgets: Option<RawBudgets>,
    reference_table: Option<String>,
    factor: Option<RawFactor>,
}

#[derive(Debug, Clone)]
pub struct AlgebraSpec {
    pub t: Vec<Poly>,
    pub limits: AlgebraLimits,
}

#[derive(Debug, Clone)]
pub enum GeneratorSpec {
    Polys(Vec<Poly>),
    Exponents(Vec<Exponents>),
}

#[derive(Debug, Clone)]
pub struct CodeSpec {
    pub n: usize,
    pub k: u32,
    /// Coordinates of the unit in the idempotent basis, one per class.
    pub lambda: Vec<Fe>,
    /// Absent for commands that range over all codes, such as `spectrum`.
    pub generators: Option<GeneratorSpec>,
}

#[derive(Debug, Clone)]
pub enum GraySpec {
    Matrix(Vec<Vec<Fe>>),
    Identity,
}

#[derive(Debug, Clone)]
pub enum FactorSpec {
    Poly(Poly),
    Binomial { n: usize, lambda: Fe, k: u32 },
}

#[derive(Debug, Clone, Copy)]
pub struct Budgets {
    pub search: SearchBudget,
    /// Exponent patterns enumerated when computing spectra.
    pub spectrum: u64,
    pub strategy: DistanceStrategy,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { search: SearchBudget::default(), spectrum: 1_000_000, strategy: DistanceStrategy::Auto }
    }
}

impl Budgets {
    /// Applies a single cap to every search.
    pub fn cap(&mut self, n: u64) {
        self.search.codewords = n;
        self.search.subsets = n;
        self.spectrum = n;
    }
}

#[derive(Debug, Clone)]
pub struct Job {
    pub name: Option<String>,
    pub field: Arc<Field>,
    pub algebra: Option<AlgebraSpec>,
    pub code: Option<CodeSpec>,
    pub gray: Option<GraySpec>,
    pub budgets: Budgets,
    pub reference_table: Option<PathBuf>,
    pub factor: Option<FactorSpec>,
}

struct Ctx<'a> {
    field: &'a Arc<Field>,
    errors: Vec<String>,
}

impl Ctx<'_> {
    fn element(&mut self, raw: &RawElement, path: &str) -> Option<Fe> {
        let f = self.field;
        let res = match raw {
            RawElement::Int(v) if *v < f.p() as u64 => Ok(f.from_int(*v as i64)),
            RawElement::Int(v) => Err(format!("{v} is not an element of the prime field GF({})", f.p())),
            RawElement::Text(s) => f.parse_element(s).map_err(|e| e.to_string()),
            RawElement::Coords(c) => f.from_coords(c).map_err(|e| e.to_string()),
        };
        res.map_err(|e| self.errors.push(format!("{path}: {e}"))).ok()
    }

    fn elements(&mut self, raw: &[RawElement], path: &str) -> Option<Vec<Fe>> {
        let out: Vec<Option<Fe>> = raw.iter().enumerate().map(|(i, r)| self.element(r, &format!("{path}/{i}"))).collect();
        out.into_iter().collect()
    }

    fn poly(&mut self, raw: &RawPoly, path: &str) -> Option<Poly> {
        let coeffs = match raw {
            RawPoly::Coeffs(c) => self.elements(c, path)?,
            RawPoly::Text(s) => {
                let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
                let mut out = Vec::new();
                let mut ok = true;
                for (i, tok) in inner.split(',').enumerate() {
                    match self.field.parse_element(tok) {
                        Ok(c) => out.push(c),
                        Err(e) => {
                            self.errors.push(format!("{path}: entry {i}: {e}"));
                            ok = false;
                        }
                    }
                }
                if !ok {
                    return None;
                }
                out
            }
        };
        let p = Poly::new(self.field, coeffs);
        if p.is_zero() {
            self.errors.push(format!("{path}: polynomial is zero"));
            return None;
        }
        Some(p)
    }

    fn polys(&mut self, raw: &[RawPoly], path: &str) -> Option<Vec<Poly>> {
        let out: Vec<Option<Poly>> = raw.iter().enumerate().map(|(i, r)| self.poly(r, &format!("{path}/{i}"))).collect();
        out.into_iter().collect()
    }
}

impl Job {
    pub fn load(path: &Path) -> Result<Job, AppError> {
        let text = std::fs::read_to_string(path).map_err(|e| AppError::Io(format!("{}: {e}", path.display())))?;
        Job::parse(&text, path.parent())
    }

    /// Parses and validates a job; relative paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Job, AppError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| AppError::Config(vec![format!("not valid JSON: {e}")]))?;
        let errors = schema::validate(&schema::job_schema(), &doc);
        if !errors.is_empty() {
            return Err(AppError::Config(errors));
        }
        let raw: RawJob = serde_json::from_value(doc).map_err(|e| AppError::Config(vec![e.to_string()]))?;
        build(raw, base)
    }
}

fn build(raw: RawJob, base: Option<&Path>) -> Result<Job, AppError> {
    let rf = &raw.field;
    let mut field = Field::new(rf.p, rf.e, &rf.modulus).map_err(|e| AppError::Config(vec![format!("/field: {e}")]))?;
    if let Some(label) = &rf.label {
        field = field.with_label(label);
    }
    let field = Arc::new(field);
    let mut cx = Ctx { field: &field, errors: Vec::new() };

    let algebra = raw.algebra.as_ref().and_then(|a| {
        let t = cx.polys(&a.t, "/algebra/t")?;
        let d = AlgebraLimits::default();
        Some(AlgebraSpec {
            t,
            limits: AlgebraLimits { max_vars: a.max_vars.unwrap_or(d.max_vars), max_dim: a.max_dim.unwrap_or(d.max_dim) },
        })
    });

    let code = raw.code.as_ref().and_then(|c| {
        let k = c.k.unwrap_or(0);
        if k >= field.e() {
            cx.errors.push(format!("/code/k: Galois parameter {k} must be below e = {}", field.e()));
        }
        let lambda = cx.elements(&c.lambda, "/code/lambda");
        let generators = match (&c.generators, &c.exponents) {
            (Some(g), None) => cx.polys(g, "/code/generators").map(GeneratorSpec::Polys),
            (None, Some(u)) => Some(GeneratorSpec::Exponents(u.clone())),
            (Some(_), Some(_)) => {
                cx.errors.push("/code: give either generators or exponents, not both".into());
                None
            }
            (None, None) => None,
        };
        let lambda = lambda?;
        if let Some(GeneratorSpec::Polys(g)) = &generators {
            if g.len() != lambda.len() {
                cx.errors.push(format!("/code: {} generators for {} lambda coordinates", g.len(), lambda.len()));
            }
        }
        if let Some(GeneratorSpec::Exponents(u)) = &generators {
            if u.len() != lambda.len() {
                cx.errors.push(format!("/code: {} exponent sets for {} lambda coordinates", u.len(), lambda.len()));
            }
        }
        if let Some(i) = lambda.iter().position(|c| c.is_zero()) {
            cx.errors.push(format!("/code/lambda/{i}: coordinate is zero, so lambda is not a unit"));
        }
        Some(CodeSpec { n: c.n, k, lambda, generators })
    });

    let gray = raw.gray.as_ref().and_then(|g| match (&g.matrix, g.identity) {
        (Some(m), None | Some(false)) => {
            let rows: Vec<Option<Vec<Fe>>> =
                m.iter().enumerate().map(|(i, r)| cx.elements(r, &format!("/gray/matrix/{i}"))).collect();
            let rows: Option<Vec<Vec<Fe>>> = rows.into_iter().collect();
            let rows = rows?;
            if rows.iter().any(|r| r.len() != rows.len()) {
                cx.errors.push(format!("/gray/matrix: must be square, has {} rows", rows.len()));
            }
            Some(GraySpec::Matrix(rows))
        }
        (None, Some(true)) => Some(GraySpec::Identity),
        _ => {
            cx.errors.push("/gray: give exactly one of matrix or identity: true".into());
            None
        }
    });

    let mut budgets = Budgets::default();
    if let Some(b) = &raw.budgets {
        if let Some(v) = b.codewords {
            budgets.search.codewords = v;
        }
        if let Some(v) = b.subsets {
            budgets.search.subsets = v;
        }
        if let Some(v) = b.spectrum {
            budgets.spectrum = v;
        }
        budgets.strategy = match b.strategy.as_deref() {
            None | Some("auto") => DistanceStrategy::Auto,
            Some("enumerate") => DistanceStrategy::Enumerate,
            Some("column") => DistanceStrategy::ColumnSearch,
            Some(_) => DistanceStrategy::Both,
        };
    }

    let factor = raw.factor.as_ref().and_then(|f| match (&f.poly, f.n, &f.lambda) {
        (Some(p), None, None) => cx.poly(p, "/factor/poly").map(FactorSpec::Poly),
        (None, Some(n), lam) => {
            let lambda = match lam {
                Some(l) => cx.element(l, "/factor/lambda")?,
                None => field.one(),
            };
            let k = f.k.unwrap_or(0);
            if k >= field.e() {
                cx.errors.push(format!("/factor/k: Galois parameter {k} must be below e = {}", field.e()));
            }
            Some(FactorSpec::Binomial { n, lambda, k })
        }
        _ => {
            cx.errors.push("/factor: give either poly or n (with optional lambda and k)".into());
            None
        }
    });

    let errors = cx.errors;
    if !errors.is_empty() {
        return Err(AppError::Config(errors));
    }
    let reference_table = raw.reference_table.map(|p| match base {
        Some(b) if Path::new(&p).is_relative() => b.join(p),
        _ => PathBuf::from(p),
    });
    Ok(Job { name: raw.name, field, algebra, code, gray, budgets, reference_table, factor })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GF9: &str = r#""field": {"p": 3, "e": 2, "modulus": [2, 2, 1]}"#;

    #[test]
    fn element_notations_agree() {
        let text = format!(
            r#"{{{GF9}, "code": {{"n": 7, "k": 1, "lambda": [1, "w^2", [0, 1]],
                "generators": ["(2,w^5,w^3,1)", [2, "w^5", "w^3", 1], "(w^2,1)"]}}}}"#
        );
        let job = Job::parse(&text, None).unwrap();
        let code = job.code.unwrap();
        let f = &job.field;
        assert_eq!(code.lambda, vec![f.one(), f.omega_pow(2), f.omega_pow(1)]);
        let Some(GeneratorSpec::Polys(g)) = code.generators else { panic!() };
        assert_eq!(g[0], g[1]);
        assert_eq!(g[2].coeffs(), &[f.omega_pow(2), f.one()]);
    }

    #[test]
    fn semantic_errors_are_collected() {
        let text = format!(
            r#"{{{GF9}, "code": {{"n": 7, "k": 2, "lambda": [0, 5], "generators": ["(w^x,1)"]}},
                "gray": {{"matrix": [["w", 1]]}}, "factor": {{}}}}"#
        );
        let Err(AppError::Config(errs)) = Job::parse(&text, None) else { panic!() };
        for needle in ["/code/k", "/code/lambda/1", "/code/generators/0", "/gray/matrix", "/factor"] {
            assert!(errs.iter().any(|e| e.starts_with(needle)), "{needle} missing from {errs:#?}");
        }
    }

    #[test]
    fn bad_field_is_reported() {
        let Err(AppError::Config(errs)) = Job::parse(r#"{"field": {"p": 3, "e": 2, "modulus": [1, 0, 1]}}"#, None)
        else {
            panic!()
        };
        assert_eq!(errs.len(), 1);
        assert!(errs[0].starts_with("/field"));
    }

    #[test]
    fn relative_reference_path() {
        let text = format!(r#"{{{GF9}, "reference_table": "bounds.csv"}}"#);
        let job = Job::parse(&text, Some(Path::new("/data/cfg"))).unwrap();
        assert_eq!(job.reference_table.unwrap(), PathBuf::from("/data/cfg/bounds.csv"));
    }
}
