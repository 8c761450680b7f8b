//! Human-readable renderings. JSON output goes through `serde_json`.

use std::fmt::Write;

use serde::Serialize;

use crate::commands::{
    ClassifyReport, DecomposeReport, EaqeccCmdReport, FactorReport, Flags, GrayReport, HullCmdReport, SpectrumReport,
};
use crate::table1::Table1Report;

pub trait Render: Serialize {
    fn text(&self) -> String;

    fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    fn render(&self, json: bool) -> String {
        if json {
            self.json()
        } else {
            self.text()
        }
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl Render for DecomposeReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "field {}", self.field);
        for (i, t) in self.defining_polynomials.iter().enumerate() {
            let _ = writeln!(s, "t_{} = {}", i + 1, t);
        }
        let _ = writeln!(s, "dimension {}, {} classes", self.dimension, self.classes.len());
        for c in &self.classes {
            let _ = writeln!(s, "class {} (size {}; minimal polynomials {})", c.class, c.size, c.minimal_polynomials.join(", "));
            let _ = writeln!(s, "  e = {}", c.idempotent);
        }
        s
    }
}

impl Render for FactorReport {
    fn text(&self) -> String {
        let mut s = String::new();
        match self {
            FactorReport::Polynomial { input, unit, factors } => {
                let _ = writeln!(s, "factorization of {input}, unit {unit}");
                for f in factors {
                    let _ = writeln!(s, "  {}^{}  deg {}  {}", f.tuple, f.multiplicity, f.degree, f.factor);
                }
            }
            FactorReport::Binomial { n, lambda, k, n_prime, e_prime, multiplicity, r, l, divisors, classes } => {
                let _ = writeln!(s, "x^{n} - {lambda}, k = {k}");
                let _ = writeln!(s, "n' = {n_prime}, e' = {e_prime}, multiplicity {multiplicity}, r = {r}, l = {l}");
                let d: Vec<String> = divisors.iter().map(u32::to_string).collect();
                let _ = writeln!(s, "orbit sizes {}", d.join(", "));
                for c in classes {
                    let _ = writeln!(
                        s,
                        "t = {} (a = {}), j = {}, ord_j(q) = {}, beta = {}",
                        c.t, c.a, c.j, c.ord_j, c.beta
                    );
                    for o in &c.orbits {
                        let _ = writeln!(s, "  {}", o.join(" -> "));
                    }
                }
            }
        }
        s
    }
}

impl Render for HullCmdReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, k = {}, lambda = {}", self.n, self.k, self.lambda);
        let _ = writeln!(s, "q-dimension {}, dual q-dimension {}", self.q_dimension, self.dual_q_dimension);
        for c in &self.components {
            let _ = writeln!(s, "class {}: lambda {}, g = {}, dim {}", c.class, c.lambda, c.generator, c.dimension);
            let u: Vec<String> =
                c.exponents.iter().map(|o| o.iter().map(u32::to_string).collect::<Vec<_>>().join(",")).collect();
            let _ = writeln!(s, "  exponents [{}]", u.join(" | "));
            for r in &c.rows {
                let _ = writeln!(
                    s,
                    "  t={} a={} j={} beta={} ord={} b={} -> {}",
                    r.t, r.a, r.j, r.beta, r.ord_j, r.b, r.contribution
                );
            }
            let _ = writeln!(s, "  hull: formula {}, lcm {}, matrix {}", c.formula, c.lcm_route, c.matrix_route);
        }
        let _ = writeln!(s, "hull dimension: formula {}, oracle {}", self.formula, self.oracle);
        s
    }
}

fn flags_line(f: &Flags) -> String {
    format!(
        "self-dual {}, dual-containing {}, self-orthogonal {}, LCD {}",
        yes(f.self_dual),
        yes(f.dual_containing),
        yes(f.self_orthogonal),
        yes(f.lcd)
    )
}

impl Render for ClassifyReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, k = {}, lambda = {}", self.n, self.k, self.lambda);
        for c in &self.components {
            let _ = writeln!(s, "class {}: g = {}", c.class, c.generator);
            let _ = writeln!(s, "  {}", flags_line(&c.flags));
            let _ = writeln!(
                s,
                "  dual-containing by congruence {}, by definition {}",
                yes(c.congruence_dual_containing),
                yes(c.matrix_dual_containing)
            );
        }
        let _ = writeln!(s, "code: {}", flags_line(&self.flags));
        s
    }
}

impl Render for SpectrumReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}, k = {}, lambda = {}, {} classes", self.n, self.k, self.lambda, self.classes);
        let d: Vec<String> = self.dimensions.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "hull dimensions {{{}}}", d.join(", "));
        let _ = writeln!(s, "size {}", self.size);
        match &self.exhaustive {
            Some(_) => {
                let _ = writeln!(s, "divisor enumeration agrees");
            }
            None => {
                let _ = writeln!(s, "divisor enumeration skipped (budget)");
            }
        }
        s
    }
}

impl Render for GrayReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "gamma = {}", self.gamma);
        let _ = writeln!(
            s,
            "image: length {}, dimension {}, dual dimension {}, hull dimension {}",
            self.length, self.dimension, self.dual_dimension, self.hull_dimension
        );
        let _ = writeln!(s, "generator matrix (reduced):");
        for r in &self.generator_rows {
            let _ = writeln!(s, "  {r}");
        }
        s
    }
}

impl Render for EaqeccCmdReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let remark = if self.labels.is_empty() { "-".to_string() } else { self.labels.join(", ") };
        let _ = writeln!(s, "Gray image {} ({remark}), distance by {} search", self.classical, self.distance_strategy);
        let _ = writeln!(s, "hull dimension {}", self.hull_dimension);
        let _ = writeln!(s, "EAQECC {}", self.eaqecc);
        let _ = writeln!(s, "(n - k + c) - 2(d - 1) = {}", self.gap);
        if !self.bound_hypothesis {
            let _ = writeln!(s, "note: d > (n + 2)/2, outside the range where the distance bound is stated");
        }
        s
    }
}

impl Render for Table1Report {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:>3}  {:>3}  {:<10}  {:<18}  {:<16}  {:<14}  {:<20}  {:>4}  remark",
            "row", "n", "lambda", "g1", "g2", "classical", "EAQECC", "diff"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>3}  {:>3}  {:<10}  {:<18}  {:<16}  {:<14}  {:<20}  {:>4}  {}",
                r.row,
                r.n,
                r.lambda,
                r.g1,
                r.g2,
                r.classical,
                r.eaqecc,
                r.diff,
                r.labels.join(", ")
            );
        }
        if self.mismatches.is_empty() {
            let _ = writeln!(s, "all {} rows match the golden file", self.rows.len());
        } else {
            for m in &self.mismatches {
                let _ = writeln!(s, "MISMATCH {m}");
            }
        }
        s
    }
}
