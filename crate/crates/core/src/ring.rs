use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::monomial::MonomialOrder;

/// A polynomial ring `field[vars]` together with the monomial order its
/// polynomials are kept sorted in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    field: CoeffField,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: CoeffField, vars: Vec<String>) -> Result<Arc<Self>> {
        Self::with_order(field, vars, MonomialOrder::GrevLex)
    }

    pub fn with_order(field: CoeffField, vars: Vec<String>, order: MonomialOrder) -> Result<Arc<Self>> {
        let mut seen = HashSet::new();
        for v in &vars {
            if v.is_empty() || !seen.insert(v.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate or empty variable name `{v}`")));
            }
            if matches!(field, CoeffField::RationalFunction(_)) && v == "t" {
                return Err(Error::InvalidArgument("`t` is the field parameter of F_p(t)".into()));
            }
        }
        if let MonomialOrder::Block { split, .. } = order {
            if split > vars.len() {
                return Err(Error::InvalidArgument("block split exceeds variable count".into()));
            }
        }
        Ok(Arc::new(PolyRing { vars, field, order }))
    }

    /// Convenience for tests and scripted examples.
    pub fn parse_vars(field: CoeffField, vars: &str) -> Result<Arc<Self>> {
        Self::new(field, vars.split(',').map(|s| s.trim().to_string()).collect())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> &CoeffField {
        &self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field, different order.
    pub fn reordered(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(PolyRing { vars: self.vars.clone(), field: self.field.clone(), order })
    }

    /// A name not among the current variables, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.var_index(base).is_none() && base != "t" {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}_{i}")).find(|n| self.var_index(n).is_none()).unwrap()
    }

    pub(crate) fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }

    pub(crate) fn ensure_same(a: &Arc<Self>, b: &Arc<Self>) -> Result<()> {
        if Self::same(a, b) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{a} vs {b}")))
        }
    }
}

impl fmt::Display for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.field, self.vars.join(","))
    }
}
