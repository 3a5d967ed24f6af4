use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use super::Monomial;
use crate::exactfield::Field;
use crate::{Error, Result};

/// Monomial orders. Gröbner bases default to degree reverse lexicographic;
/// lex is the FGLM target used for triangular solving.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TermOrder {
    DegRevLex,
    Lex,
}

impl TermOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            TermOrder::Lex => {
                for (x, y) in a.0.iter().zip(b.0.iter()) {
                    if x != y {
                        return x.cmp(y);
                    }
                }
                Ordering::Equal
            }
            TermOrder::DegRevLex => {
                let (da, db) = (a.degree(), b.degree());
                if da != db {
                    return da.cmp(&db);
                }
                for (x, y) in a.0.iter().zip(b.0.iter()).rev() {
                    if x != y {
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

struct RingInner {
    field: Field,
    vars: Vec<String>,
    order: TermOrder,
}

/// Coefficient field, ordered variable names and term order of a
/// polynomial ring. Cheap to clone.
#[derive(Clone)]
pub struct PolyRing {
    inner: Arc<RingInner>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.order == other.inner.order
                && self.inner.vars == other.inner.vars
                && self.inner.field == other.inner.field)
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.inner.field, self.inner.vars)
    }
}

impl PolyRing {
    pub fn new<S: Into<String>>(field: &Field, vars: impl IntoIterator<Item = S>, order: TermOrder) -> PolyRing {
        PolyRing {
            inner: Arc::new(RingInner {
                field: field.clone(),
                vars: vars.into_iter().map(Into::into).collect(),
                order,
            }),
        }
    }

    /// Degree-reverse-lex ring, the default everywhere.
    pub fn drl<S: Into<String>>(field: &Field, vars: impl IntoIterator<Item = S>) -> PolyRing {
        PolyRing::new(field, vars, TermOrder::DegRevLex)
    }

    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    pub fn vars(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn nvars(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn order(&self) -> TermOrder {
        self.inner.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.inner.vars.iter().position(|v| v == name)
    }

    pub fn var_index_or_err(&self, name: &str) -> Result<usize> {
        self.var_index(name).ok_or_else(|| Error::UnknownVariable(name.into()))
    }

    /// Same variables and field under another order.
    pub fn with_order(&self, order: TermOrder) -> PolyRing {
        PolyRing::new(&self.inner.field, self.inner.vars.iter().cloned(), order)
    }

    /// Same variables and order over another field.
    pub fn with_field(&self, field: &Field) -> PolyRing {
        PolyRing::new(field, self.inner.vars.iter().cloned(), self.inner.order)
    }

    pub fn cmp_mon(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.inner.order.cmp(a, b)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        use core::fmt::Write;
        let mut s = String::new();
        for (name, &e) in self.inner.vars.iter().zip(m.0.iter()) {
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(name);
            if e > 1 {
                let _ = write!(s, "^{}", e);
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }
}
