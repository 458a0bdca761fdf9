//! Scripted reproductions of worked examples and explicit constructions,
//! each producing a pass/fail report.

mod examples;
mod nonrobust;

use std::collections::BTreeMap;
use std::fmt::{self, Display};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::CoeffField;

pub use examples::{brenner_monsky, cubic_forcing, dvr, fermat_tight, normalization_w, regular_forcing, roberts, uv};
pub use nonrobust::{
    comparison, filtration_generators, generator, matrix_identity, special_filtration, Sign, XuYvRing,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub description: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub artifacts: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

impl ExampleReport {
    pub fn new(name: &str) -> Self {
        ExampleReport {
            name: name.to_string(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            artifacts: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("serializable parameter"));
        self
    }

    /// Record a check; it passes iff the rendered values agree.
    pub fn check(&mut self, description: impl Into<String>, expected: impl Display, computed: impl Display) -> bool {
        let (expected, computed) = (expected.to_string(), computed.to_string());
        let pass = expected == computed;
        self.checks.push(Check { description: description.into(), expected, computed, pass });
        pass
    }

    pub fn artifact(&mut self, key: &str, value: impl Serialize) {
        self.artifacts.insert(key.to_string(), serde_json::to_value(value).expect("serializable artifact"));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

impl Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(f, "  params: {}", ps.join(" "))?;
        }
        for c in &self.checks {
            let mark = if c.pass { "pass" } else { "FAIL" };
            writeln!(f, "  [{mark}] {}: expected {}, computed {}", c.description, c.expected, c.computed)?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        write!(f, "  {}/{} checks passed", self.checks.len() - self.failures(), self.checks.len())
    }
}

/// Optional overrides; each example documents its defaults.
#[derive(Clone, Debug, Default)]
pub struct LabParams {
    pub t: Option<u32>,
    pub s: Option<u32>,
    pub k_max: Option<u32>,
    pub field: Option<CoeffField>,
    pub sign: Option<Sign>,
    /// Degree bound for multiplier searches.
    pub degree_bound: Option<u32>,
}

pub struct ExampleInfo {
    pub name: &'static str,
    pub summary: &'static str,
    /// Excluded from [`run_all`] unless long examples are requested.
    pub long: bool,
}

pub const EXAMPLES: &[ExampleInfo] = &[
    ExampleInfo { name: "comparison", summary: "containments between I_t and I'_t for xu, yv, xv+yu", long: false },
    ExampleInfo {
        name: "matrix_identity",
        summary: "3x3 factorization I'_{t+s} = I'_t·M and its determinant",
        long: false,
    },
    ExampleInfo {
        name: "special_filtration",
        summary: "(s+t)^3 - t^3 step filtration of R/(I'_{s+t}, det)",
        long: false,
    },
    ExampleInfo { name: "dvr", summary: "exact quasilengths over a truncated DVR", long: false },
    ExampleInfo { name: "uv", summary: "content of k[u,v]/(uv) and its branches along x = u+v", long: false },
    ExampleInfo {
        name: "roberts",
        summary: "generic forcing algebra for x1^2x2^2x3^2 over (x1^3, x2^3, x3^3)",
        long: false,
    },
    ExampleInfo {
        name: "cubic_forcing",
        summary: "forcing algebra of z^2 over (x, y) on the Fermat cubic",
        long: false,
    },
    ExampleInfo { name: "normalization_w", summary: "w = (y^2+zv)/x and its integral equation", long: false },
    ExampleInfo {
        name: "regular_forcing",
        summary: "short filtration in the forcing algebra of xy over (x^2, y^2)",
        long: false,
    },
    ExampleInfo {
        name: "fermat_tight",
        summary: "Frobenius test z·z^{2q} in (x^q, y^q) on the Fermat cubic, F7",
        long: false,
    },
    ExampleInfo {
        name: "brenner_monsky",
        summary: "test-element search for x^3y^3 over (x^4, y^4, z^4), F2(t)",
        long: true,
    },
];

pub fn run_example(name: &str, params: &LabParams) -> Result<ExampleReport> {
    let name = if name == "nonrobust" { "regular_forcing" } else { name };
    match name {
        "comparison" => {
            comparison(params.t.unwrap_or(1), params.field.clone().unwrap_or(f2()), params.sign.unwrap_or(Sign::Plus))
        }
        "matrix_identity" => {
            let t = params.t.unwrap_or(1);
            matrix_identity(params.s.unwrap_or(t.max(2)), t, params.field.clone().unwrap_or(f2()))
        }
        "special_filtration" => {
            special_filtration(params.s.unwrap_or(2), params.t.unwrap_or(1), params.field.clone().unwrap_or(f2()))
                .map(|(_, report)| report)
        }
        "dvr" => dvr(),
        "uv" => uv(params.t.unwrap_or(3)),
        "roberts" => roberts(params.k_max.unwrap_or(3)),
        "cubic_forcing" => cubic_forcing(params.k_max.unwrap_or(4)),
        "normalization_w" => normalization_w(),
        "regular_forcing" => regular_forcing(),
        "fermat_tight" => fermat_tight(params.degree_bound.unwrap_or(1)),
        "brenner_monsky" => brenner_monsky(params.degree_bound.unwrap_or(1)),
        other => {
            let known: Vec<&str> = EXAMPLES.iter().map(|e| e.name).collect();
            Err(Error::InvalidArgument(format!("unknown example `{other}` (known: {})", known.join(", "))))
        }
    }
}

/// Every registered example with default parameters, in registry order.
pub fn run_all(long: bool) -> Result<Vec<ExampleReport>> {
    EXAMPLES.iter().filter(|e| long || !e.long).map(|e| run_example(e.name, &LabParams::default())).collect()
}

fn f2() -> CoeffField {
    CoeffField::prime(2).expect("2 is prime")
}
