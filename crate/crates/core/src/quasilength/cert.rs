use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::linalg::{Subspace, Vector};
use crate::parse::{parse_poly, parse_ring};
use crate::poly::Polynomial;
use crate::quotient::{vector_module, QuotientPresentation, VectorModule, DEFAULT_DEGREE_BOUND};
use crate::ring::PolyRing;

/// A finite-length module, optionally remembered as a direct sum of
/// ideal quotients `J_i/K_i` so its elements can be written as tuples of
/// polynomials.
#[derive(Clone, Debug)]
pub struct ModuleContext {
    module: VectorModule,
    summands: Option<Vec<Summand>>,
}

#[derive(Clone, Debug)]
struct Summand {
    j: Ideal,
    k: Ideal,
    module: VectorModule,
}

impl ModuleContext {
    pub fn from_module(module: VectorModule) -> Self {
        ModuleContext { module, summands: None }
    }

    /// `⊕ J_i/K_i`.
    pub fn direct_sum(ring: &Arc<PolyRing>, parts: Vec<(Ideal, Ideal)>) -> Result<Self> {
        let mut summands = Vec::with_capacity(parts.len());
        for (j, k) in parts {
            let module = vector_module(&j, &k, DEFAULT_DEGREE_BOUND)?;
            summands.push(Summand { j, k, module });
        }
        let module = match summands.len() {
            0 => VectorModule::zero(ring),
            1 => summands[0].module.clone(),
            _ => {
                let mut acc = summands[0].module.direct_sum(&summands[1].module)?;
                for s in &summands[2..] {
                    acc = acc.direct_sum(&s.module)?;
                }
                acc
            }
        };
        Ok(ModuleContext { module, summands: Some(summands) })
    }

    pub fn module(&self) -> &VectorModule {
        &self.module
    }

    /// Coordinates of the tuple `(f_1, …, f_r)`.
    pub fn element(&self, parts: &[Polynomial]) -> Result<Vector> {
        let summands = self.summands()?;
        if parts.len() != summands.len() {
            return Err(Error::InvalidArgument(format!(
                "expected a {}-tuple of polynomials, got {}",
                summands.len(),
                parts.len()
            )));
        }
        let mut out = Vec::with_capacity(self.module.dim());
        for (s, f) in summands.iter().zip(parts) {
            out.extend(s.module.element(f)?);
        }
        Ok(out)
    }

    pub fn polynomials(&self, v: &[crate::field::Coeff]) -> Result<Vec<Polynomial>> {
        let mut offset = 0;
        let mut out = Vec::new();
        for s in self.summands()? {
            let d = s.module.dim();
            out.push(s.module.polynomial_of(&v[offset..offset + d])?);
            offset += d;
        }
        Ok(out)
    }

    fn summands(&self) -> Result<&[Summand]> {
        self.summands
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("module was not built from ideal quotients".into()))
    }
}

/// Where the filtered module lives.
#[derive(Clone, Debug)]
pub enum FiltrationContext {
    Module(ModuleContext),
    /// `R / target·R`; need not have finite length.
    Quotient {
        ring: QuotientPresentation,
        target: Ideal,
    },
}

impl FiltrationContext {
    pub fn ring(&self) -> &Arc<PolyRing> {
        match self {
            FiltrationContext::Module(m) => m.module.ring(),
            FiltrationContext::Quotient { ring, .. } => ring.ring(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Vector(Vector),
    Poly(Polynomial),
}

/// Outcome of validation. `step` is 1-based; a failure at step `h + 1`
/// means the generators do not exhaust the module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unchecked,
    Valid,
    Invalid { step: usize, witness: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

/// An ordered generator list `g_1, …, g_h` claimed to give a filtration
/// `0 = L_0 ⊂ L_1 ⊂ … ⊂ L_h = M` with `L_j = L_{j-1} + R g_j` and
/// `I g_j ⊆ L_{j-1}`.
#[derive(Clone, Debug)]
pub struct FiltrationCertificate {
    pub context: FiltrationContext,
    pub ideal: Ideal,
    pub generators: Vec<Element>,
    pub validated: Verdict,
}

impl FiltrationCertificate {
    pub fn for_module(ctx: ModuleContext, ideal: Ideal, generators: Vec<Vector>) -> Self {
        FiltrationCertificate {
            context: FiltrationContext::Module(ctx),
            ideal,
            generators: generators.into_iter().map(Element::Vector).collect(),
            validated: Verdict::Unchecked,
        }
    }

    pub fn for_quotient(ring: QuotientPresentation, target: Ideal, ideal: Ideal, generators: Vec<Polynomial>) -> Self {
        FiltrationCertificate {
            context: FiltrationContext::Quotient { ring, target },
            ideal,
            generators: generators.into_iter().map(Element::Poly).collect(),
            validated: Verdict::Unchecked,
        }
    }

    pub fn factors(&self) -> usize {
        self.generators.len()
    }

    /// Run [`validate_filtration`] and store the verdict.
    pub fn validate(&mut self) -> Result<&Verdict> {
        self.validated = validate_filtration(self)?;
        Ok(&self.validated)
    }

    pub fn validated(mut self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Human-readable generator list.
    pub fn describe_generators(&self) -> Vec<String> {
        self.generators
            .iter()
            .map(|g| match (g, &self.context) {
                (Element::Poly(p), _) => p.to_string(),
                (Element::Vector(v), FiltrationContext::Module(m)) => match m.polynomials(v) {
                    Ok(ps) if ps.len() == 1 => ps[0].to_string(),
                    Ok(ps) => format!("({})", ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")),
                    Err(_) => m.module.describe(v),
                },
                (Element::Vector(v), _) => format!("{v:?}"),
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let context = match &self.context {
            FiltrationContext::Quotient { ring, target } => {
                json!({"kind": "quotient", "ring": ring.to_string(), "target": gens_text(target)})
            }
            FiltrationContext::Module(m) => match &m.summands {
                Some(s) => json!({
                    "kind": "module",
                    "ring": m.module.ring().to_string(),
                    "summands": s.iter().map(|s| json!({"j": gens_text(&s.j), "k": gens_text(&s.k)})).collect::<Vec<_>>(),
                }),
                None => json!({"kind": "module", "module": m.module.to_json()}),
            },
        };
        let generators: Vec<Value> = match &self.context {
            FiltrationContext::Module(m) if m.summands.is_some() => self
                .generators
                .iter()
                .map(|g| match g {
                    Element::Vector(v) => m
                        .polynomials(v)
                        .map(|ps| Value::from(ps.iter().map(|p| p.to_string()).collect::<Vec<_>>()))
                        .unwrap_or(Value::Null),
                    Element::Poly(p) => Value::from(p.to_string()),
                })
                .collect(),
            _ => self.describe_generators().into_iter().map(Value::from).collect(),
        };
        json!({
            "context": context,
            "ideal": gens_text(&self.ideal),
            "generators": generators,
            "validated": serde_json::to_value(&self.validated).expect("serializable"),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |what: &str| Error::InvalidArgument(format!("certificate: {what}"));
        let ctx = value.get("context").ok_or_else(|| bad("missing `context`"))?;
        let kind = ctx.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing `context.kind`"))?;
        let ring_text = ctx.get("ring").and_then(Value::as_str).ok_or_else(|| bad("missing `context.ring`"))?;
        let ideal_text = value.get("ideal").and_then(Value::as_str).ok_or_else(|| bad("missing `ideal`"))?;
        let gens = value.get("generators").and_then(Value::as_array).ok_or_else(|| bad("missing `generators`"))?;
        let validated = match value.get("validated") {
            None | Some(Value::Null) => Verdict::Unchecked,
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| bad(&e.to_string()))?,
        };
        match kind {
            "quotient" => {
                let ring = QuotientPresentation::parse(ring_text)?;
                let r = ring.ring().clone();
                let target_text = ctx.get("target").and_then(Value::as_str).unwrap_or("");
                let target = Ideal::parse(&r, target_text)?;
                let ideal = Ideal::parse(&r, ideal_text)?;
                let generators = gens
                    .iter()
                    .map(|g| {
                        g.as_str().ok_or_else(|| bad("generators must be strings")).and_then(|s| parse_poly(s, &r))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut cert = FiltrationCertificate::for_quotient(ring, target, ideal, generators);
                cert.validated = validated;
                Ok(cert)
            }
            "module" => {
                let spec = parse_ring(ring_text)?;
                if !spec.relations.is_empty() {
                    return Err(bad("module contexts take a polynomial ring; put relations into the summands"));
                }
                let r = spec.ring;
                let summands =
                    ctx.get("summands").and_then(Value::as_array).ok_or_else(|| bad("missing `summands`"))?;
                let parts = summands
                    .iter()
                    .map(|s| {
                        let j = s.get("j").and_then(Value::as_str).ok_or_else(|| bad("summand without `j`"))?;
                        let k = s.get("k").and_then(Value::as_str).ok_or_else(|| bad("summand without `k`"))?;
                        Ok((Ideal::parse(&r, j)?, Ideal::parse(&r, k)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mc = ModuleContext::direct_sum(&r, parts)?;
                let ideal = Ideal::parse(&r, ideal_text)?;
                let generators = gens
                    .iter()
                    .map(|g| {
                        let parts: Vec<&str> = match g {
                            Value::String(s) => vec![s.as_str()],
                            Value::Array(a) => a
                                .iter()
                                .map(|x| x.as_str().ok_or_else(|| bad("tuple entries must be strings")))
                                .collect::<Result<_>>()?,
                            _ => return Err(bad("generators must be strings or arrays of strings")),
                        };
                        let polys = parts.iter().map(|s| parse_poly(s, &r)).collect::<Result<Vec<_>>>()?;
                        mc.element(&polys)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let mut cert = FiltrationCertificate::for_module(mc, ideal, generators);
                cert.validated = validated;
                Ok(cert)
            }
            other => Err(bad(&format!("unknown context kind `{other}`"))),
        }
    }
}

fn gens_text(i: &Ideal) -> String {
    i.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>().join("; ")
}

/// Check every filtration step and that the generators exhaust the module.
pub fn validate_filtration(cert: &FiltrationCertificate) -> Result<Verdict> {
    PolyRing::ensure_same(cert.context.ring(), cert.ideal.ring())?;
    match &cert.context {
        FiltrationContext::Module(ctx) => validate_module(ctx.module(), cert),
        FiltrationContext::Quotient { ring, target } => validate_quotient(ring, target, cert),
    }
}

fn validate_module(m: &VectorModule, cert: &FiltrationCertificate) -> Result<Verdict> {
    let field = m.field();
    let mut l = Subspace::zero(m.dim());
    for (j, g) in cert.generators.iter().enumerate() {
        crate::budget::check()?;
        let Element::Vector(v) = g else {
            return Err(Error::InvalidArgument("module certificates take vector generators".into()));
        };
        if v.len() != m.dim() {
            return Err(Error::InvalidArgument(format!("generator {} has the wrong length", j + 1)));
        }
        for f in cert.ideal.gens() {
            let w = m.apply(f, v)?;
            if !l.contains(field, &w) {
                return Ok(Verdict::Invalid {
                    step: j + 1,
                    witness: format!("({f})·g{} = {} is not in L{}", j + 1, m.describe(&w), j),
                });
            }
        }
        let mut gens: Vec<Vector> = l.basis().to_vec();
        gens.push(v.clone());
        l = m.submodule(&gens);
    }
    if l.dim() < m.dim() {
        let missing = (0..m.dim()).find(|&i| !l.contains(field, &m.unit(i))).expect("proper subspace");
        return Ok(Verdict::Invalid {
            step: cert.generators.len() + 1,
            witness: format!("[{}] is not in the span of all generators", m.labels()[missing]),
        });
    }
    Ok(Verdict::Valid)
}

fn validate_quotient(ring: &QuotientPresentation, target: &Ideal, cert: &FiltrationCertificate) -> Result<Verdict> {
    let mut n = ring.extend(target)?;
    for (j, g) in cert.generators.iter().enumerate() {
        crate::budget::check()?;
        let Element::Poly(p) = g else {
            return Err(Error::InvalidArgument("quotient certificates take polynomial generators".into()));
        };
        for f in cert.ideal.gens() {
            let w = f.mul(p);
            if !n.contains(&w)? {
                return Ok(Verdict::Invalid { step: j + 1, witness: format!("({f})·({p}) is not in L{}", j) });
            }
        }
        n = n.with_generators(std::slice::from_ref(p))?;
    }
    if !n.is_unit()? {
        return Ok(Verdict::Invalid {
            step: cert.generators.len() + 1,
            witness: "1 is not in the span of all generators".into(),
        });
    }
    Ok(Verdict::Valid)
}
