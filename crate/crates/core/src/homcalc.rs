//! Ext groups between irreducible equivariant bundles on Gr(k,n), graded by
//! degree and decomposed into GL(n) irreducibles, plus Euler pairings.
//!
//! Ext^•(A, B) = H^•(X, A^∨ ⊗ B). The bundle A^∨ ⊗ B splits into irreducibles
//! (the Levi factor is reductive), so each summand goes through BBW on its own.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bottweil::{bbw_weight, BbwResult};
use crate::error::{Error, Result};
use crate::grcore::{parse_entry, parse_parts, Diagram};
use crate::littlewood::{dim_gl, tensor_decompose, GlWeight};

/// The Grassmannian Gr(k, n) of k-planes in an n-dimensional space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GrContext {
    k: usize,
    n: usize,
}

impl GrContext {
    pub fn new(k: i64, n: i64) -> Result<Self> {
        if !(0 < k && k < n) {
            return Err(Error::InvalidContext { k, n });
        }
        Ok(GrContext { k: k as usize, n: n as usize })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of the quotient bundle V/U.
    pub fn q_rank(&self) -> usize {
        self.n - self.k
    }

    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }
}

impl fmt::Display for GrContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gr({},{})", self.k, self.n)
    }
}

/// U^u ⊗ (V/U)^q ⊗ O(t), with O(1) = det U^*.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistedIrred {
    pub u: Diagram,
    pub q: Diagram,
    pub twist: i64,
}

impl TwistedIrred {
    pub fn new(u: Diagram, q: Diagram, twist: i64) -> Self {
        TwistedIrred { u, q, twist }
    }

    pub fn structure_sheaf() -> Self {
        TwistedIrred::new(Diagram::empty(), Diagram::empty(), 0)
    }

    /// Absorbs O(t) into the U-weight: U-weight minus t·(1,…,1).
    pub fn normalize(&self, ctx: &GrContext) -> Result<TwistedIrred> {
        let u = GlWeight::from_diagram(&self.u, ctx.k)?.twist(-self.twist).to_diagram();
        GlWeight::from_diagram(&self.q, ctx.q_rank())?;
        Ok(TwistedIrred { u, q: self.q.clone(), twist: 0 })
    }

    pub fn u_weight(&self, ctx: &GrContext) -> Result<GlWeight> {
        Ok(GlWeight::from_diagram(&self.u, ctx.k)?.twist(-self.twist))
    }

    pub fn q_weight(&self, ctx: &GrContext) -> Result<GlWeight> {
        GlWeight::from_diagram(&self.q, ctx.q_rank())
    }

    /// The same bundle tensored with O(t).
    pub fn twisted(&self, t: i64) -> TwistedIrred {
        TwistedIrred { u: self.u.clone(), q: self.q.clone(), twist: self.twist + t }
    }

    pub fn dual(&self, ctx: &GrContext) -> Result<TwistedIrred> {
        Ok(TwistedIrred {
            u: self.u_weight(ctx)?.dual().to_diagram(),
            q: self.q_weight(ctx)?.dual().to_diagram(),
            twist: 0,
        })
    }

    pub fn rank(&self, ctx: &GrContext) -> Result<BigUint> {
        Ok(self.u_weight(ctx)?.dim() * self.q_weight(ctx)?.dim())
    }
}

impl fmt::Display for TwistedIrred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{};{}", self.u, self.q, self.twist)
    }
}

impl fmt::Debug for TwistedIrred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `"[u];[q];t"`; the twist may be omitted.
impl FromStr for TwistedIrred {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(';').collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(Error::Parse(format!("expected \"[u];[q];t\", got {s:?}")));
        }
        let u = Diagram::new(parse_parts(fields[0])?)?;
        let q = Diagram::new(parse_parts(fields[1])?)?;
        let twist = match fields.get(2) {
            Some(t) => parse_entry(t, "twist")?,
            None => 0,
        };
        Ok(TwistedIrred { u, q, twist })
    }
}

/// Per-degree multisets of GL(n) dominant weights.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedIrrepSum {
    pub by_degree: BTreeMap<usize, BTreeMap<Vec<i64>, u64>>,
}

impl GradedIrrepSum {
    pub fn is_zero(&self) -> bool {
        self.by_degree.values().all(BTreeMap::is_empty)
    }

    fn add(&mut self, degree: usize, weight: Vec<i64>, mult: u64) -> Result<()> {
        let slot = self.by_degree.entry(degree).or_default().entry(weight).or_insert(0);
        *slot = slot.checked_add(mult).ok_or(Error::Overflow("ext multiplicity"))?;
        Ok(())
    }

    /// Multiplicity of the trivial representation in each degree (zero degrees omitted).
    pub fn invariants(&self) -> BTreeMap<usize, u64> {
        self.by_degree
            .iter()
            .filter_map(|(&d, m)| {
                let c = m.iter().filter(|(w, _)| w.iter().all(|&x| x == 0)).map(|(_, &c)| c).sum::<u64>();
                (c > 0).then_some((d, c))
            })
            .collect()
    }

    pub fn dims(&self) -> BTreeMap<usize, BigUint> {
        self.by_degree
            .iter()
            .map(|(&d, m)| (d, m.iter().map(|(w, &c)| dim_gl(w) * BigUint::from(c)).sum()))
            .collect()
    }

    pub fn euler_characteristic(&self) -> BigInt {
        self.dims()
            .into_iter()
            .map(|(d, v)| if d % 2 == 0 { BigInt::from(v) } else { -BigInt::from(v) })
            .fold(BigInt::zero(), |a, b| a + b)
    }

    pub fn to_json(&self) -> Value {
        let degrees: serde_json::Map<String, Value> = self
            .by_degree
            .iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(d, m)| {
                let items: Vec<Value> = m.iter().map(|(w, c)| json!({"weight": w, "mult": c})).collect();
                (d.to_string(), Value::Array(items))
            })
            .collect();
        json!({ "degrees": degrees })
    }
}

impl fmt::Display for GradedIrrepSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (d, m) in &self.by_degree {
            let parts: Vec<String> = m
                .iter()
                .map(|(w, c)| if *c == 1 { format!("{w:?}") } else { format!("{c}x{w:?}") })
                .collect();
            writeln!(f, "Ext^{d}: {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

impl GrContext {
    /// Walks the irreducible summands of A^∨ ⊗ B and feeds each nonzero BBW result to `visit`.
    /// Stops early when `visit` returns false.
    fn for_each_ext_summand(
        &self,
        a: &TwistedIrred,
        b: &TwistedIrred,
        mut visit: impl FnMut(usize, &[i64], u64) -> Result<bool>,
    ) -> Result<()> {
        let us = tensor_decompose(&a.u_weight(self)?.dual(), &b.u_weight(self)?)?;
        let qs = tensor_decompose(&a.q_weight(self)?.dual(), &b.q_weight(self)?)?;
        let mut weight = Vec::with_capacity(self.n);
        for (qw, qm) in &qs.terms {
            for (uw, um) in &us.terms {
                weight.clear();
                weight.extend_from_slice(qw);
                weight.extend_from_slice(uw);
                if let BbwResult::Cohomology { degree, dominant } = bbw_weight(&weight) {
                    if degree > self.dim() {
                        return Err(Error::Internal(format!(
                            "BBW degree {degree} exceeds dim {} of {self}",
                            self.dim()
                        )));
                    }
                    let m = qm.checked_mul(*um).ok_or(Error::Overflow("ext multiplicity"))?;
                    if !visit(degree, &dominant, m)? {
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ext_graded(&self, a: &TwistedIrred, b: &TwistedIrred) -> Result<GradedIrrepSum> {
        let mut out = GradedIrrepSum::default();
        self.for_each_ext_summand(a, b, |d, w, m| {
            out.add(d, w.to_vec(), m)?;
            Ok(true)
        })?;
        Ok(out)
    }

    /// H^•(X, F) = Ext^•(O, F).
    pub fn cohomology(&self, f: &TwistedIrred) -> Result<GradedIrrepSum> {
        self.ext_graded(&TwistedIrred::structure_sheaf(), f)
    }

    pub fn ext_vanishes(&self, a: &TwistedIrred, b: &TwistedIrred) -> Result<bool> {
        let mut zero = true;
        self.for_each_ext_summand(a, b, |_, _, _| {
            zero = false;
            Ok(false)
        })?;
        Ok(zero)
    }

    pub fn ext_equivariant(&self, a: &TwistedIrred, b: &TwistedIrred) -> Result<BTreeMap<usize, u64>> {
        let mut out: BTreeMap<usize, u64> = BTreeMap::new();
        self.for_each_ext_summand(a, b, |d, w, m| {
            if w.iter().all(|&x| x == 0) {
                *out.entry(d).or_insert(0) += m;
            }
            Ok(true)
        })?;
        Ok(out)
    }

    pub fn euler_chi(&self, a: &TwistedIrred, b: &TwistedIrred) -> Result<BigInt> {
        let mut chi = BigInt::zero();
        self.for_each_ext_summand(a, b, |d, w, m| {
            let v = BigInt::from(dim_gl(w) * BigUint::from(m));
            if d % 2 == 0 {
                chi += v;
            } else {
                chi -= v;
            }
            Ok(true)
        })?;
        Ok(chi)
    }

    pub fn euler_chi_g(&self, a: &TwistedIrred, b: &TwistedIrred) -> Result<i64> {
        let mut chi = 0i64;
        self.for_each_ext_summand(a, b, |d, w, m| {
            if w.iter().all(|&x| x == 0) {
                let m = i64::try_from(m).map_err(|_| Error::Overflow("equivariant euler pairing"))?;
                chi = if d % 2 == 0 { chi.checked_add(m) } else { chi.checked_sub(m) }
                    .ok_or(Error::Overflow("equivariant euler pairing"))?;
            }
            Ok(true)
        })?;
        Ok(chi)
    }
}
