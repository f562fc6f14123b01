//! Equivariant K-classes on Gr(k,n) and K₀ coordinates in the Kapranov basis.
//!
//! An [`EqKClass`] is a finite Z-combination of irreducible bundles
//! U^u ⊗ (V/U)^q. Ordinary K₀ coordinates are obtained by pairing against the
//! probes U^{−μ} and solving the (unitriangular) Kapranov Gram system.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grcore::{enumerate_box, BoxSpec, Diagram};
use crate::homcalc::{GrContext, TwistedIrred};
use crate::littlewood::{tensor_decompose, GlWeight};

/// (U-weight, (V/U)-weight), both canonical diagrams of ranks k and n−k.
pub type TermKey = (Diagram, Diagram);

#[derive(Clone, PartialEq, Eq)]
pub struct EqKClass {
    ctx: GrContext,
    terms: BTreeMap<TermKey, i64>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    u: Diagram,
    q: Diagram,
    coeff: i64,
}

impl EqKClass {
    pub fn zero(ctx: GrContext) -> Self {
        EqKClass { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: GrContext) -> Self {
        let mut c = Self::zero(ctx);
        c.terms.insert((Diagram::empty(), Diagram::empty()), 1);
        c
    }

    pub fn class_of(ctx: GrContext, a: &TwistedIrred) -> Result<Self> {
        let t = a.normalize(&ctx)?;
        let mut c = Self::zero(ctx);
        c.terms.insert((t.u, t.q), 1);
        Ok(c)
    }

    /// The class of U^u ⊗ (V/U)^q from fixed-rank weights.
    pub fn irreducible(ctx: GrContext, u: &GlWeight, q: &GlWeight) -> Result<Self> {
        if u.rank() != ctx.k() {
            return Err(Error::RankMismatch(u.rank(), ctx.k()));
        }
        if q.rank() != ctx.q_rank() {
            return Err(Error::RankMismatch(q.rank(), ctx.q_rank()));
        }
        let mut c = Self::zero(ctx);
        c.terms.insert((u.to_diagram(), q.to_diagram()), 1);
        Ok(c)
    }

    pub fn ctx(&self) -> GrContext {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, i64> {
        &self.terms
    }

    pub fn coeff(&self, u: &Diagram, q: &Diagram) -> i64 {
        self.terms.get(&(u.clone(), q.clone())).copied().unwrap_or(0)
    }

    /// Each term as an untwisted irreducible, with its coefficient.
    pub fn irreducibles(&self) -> impl Iterator<Item = (TwistedIrred, i64)> + '_ {
        self.terms.iter().map(|((u, q), &c)| (TwistedIrred::new(u.clone(), q.clone(), 0), c))
    }

    fn check_ctx(&self, other: &EqKClass) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::Precondition(format!("classes live on {} and {}", self.ctx, other.ctx)));
        }
        Ok(())
    }

    fn add_term(&mut self, key: TermKey, c: i64) -> Result<()> {
        if c == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(key.clone()).or_insert(0);
        *slot = slot.checked_add(c).ok_or(Error::Overflow("K-class coefficient"))?;
        if *slot == 0 {
            self.terms.remove(&key);
        }
        Ok(())
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &EqKClass, s: i64) -> Result<EqKClass> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (key, &c) in &other.terms {
            let c = c.checked_mul(s).ok_or(Error::Overflow("K-class coefficient"))?;
            out.add_term(key.clone(), c)?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &EqKClass) -> Result<EqKClass> {
        self.add_scaled(other, 1)
    }

    pub fn sub(&self, other: &EqKClass) -> Result<EqKClass> {
        self.add_scaled(other, -1)
    }

    pub fn scale(&self, s: i64) -> Result<EqKClass> {
        Self::zero(self.ctx).add_scaled(self, s)
    }

    pub fn mul(&self, other: &EqKClass) -> Result<EqKClass> {
        self.check_ctx(other)?;
        let (k, m) = (self.ctx.k(), self.ctx.q_rank());
        let mut out = Self::zero(self.ctx);
        for ((u1, q1), &c1) in &self.terms {
            for ((u2, q2), &c2) in &other.terms {
                let c = c1.checked_mul(c2).ok_or(Error::Overflow("K-class product"))?;
                let us = tensor_decompose(&GlWeight::from_diagram(u1, k)?, &GlWeight::from_diagram(u2, k)?)?;
                let qs = tensor_decompose(&GlWeight::from_diagram(q1, m)?, &GlWeight::from_diagram(q2, m)?)?;
                for (uw, &um) in &us.terms {
                    for (qw, &qm) in &qs.terms {
                        let mult = i64::try_from(um * qm).map_err(|_| Error::Overflow("K-class product"))?;
                        let coeff = c.checked_mul(mult).ok_or(Error::Overflow("K-class product"))?;
                        out.add_term((Diagram::new(uw.clone())?, Diagram::new(qw.clone())?), coeff)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn dual(&self) -> Result<EqKClass> {
        let (k, m) = (self.ctx.k(), self.ctx.q_rank());
        let mut out = Self::zero(self.ctx);
        for ((u, q), &c) in &self.terms {
            let u = GlWeight::from_diagram(u, k)?.dual().to_diagram();
            let q = GlWeight::from_diagram(q, m)?.dual().to_diagram();
            out.add_term((u, q), c)?;
        }
        Ok(out)
    }

    /// Tensor with O(t) = (det U^*)^t.
    pub fn twist(&self, t: i64) -> Result<EqKClass> {
        self.twist_weights(-t, 0)
    }

    /// Tensor with (det U)^a ⊗ (det V/U)^b.
    pub fn twist_weights(&self, a: i64, b: i64) -> Result<EqKClass> {
        let (k, m) = (self.ctx.k(), self.ctx.q_rank());
        let mut out = Self::zero(self.ctx);
        for ((u, q), &c) in &self.terms {
            let u = GlWeight::from_diagram(u, k)?.twist(a).to_diagram();
            let q = GlWeight::from_diagram(q, m)?.twist(b).to_diagram();
            out.add_term((u, q), c)?;
        }
        Ok(out)
    }

    /// Σ coeff · dim(u) · dim(q).
    pub fn rank(&self) -> Result<BigInt> {
        let mut r = BigInt::zero();
        for (t, c) in self.irreducibles() {
            r += BigInt::from(t.rank(&self.ctx)?) * c;
        }
        Ok(r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<TermJson> =
            self.terms.iter().map(|((u, q), &coeff)| TermJson { u: u.clone(), q: q.clone(), coeff }).collect();
        serde_json::to_value(items).expect("plain data serializes")
    }

    /// Parses a list of `{"u":[..],"q":[..],"coeff":c}` on the given Grassmannian.
    pub fn from_json(ctx: GrContext, s: &str) -> Result<EqKClass> {
        let items: Vec<TermJson> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = Self::zero(ctx);
        for it in items {
            GlWeight::from_diagram(&it.u, ctx.k())?;
            GlWeight::from_diagram(&it.q, ctx.q_rank())?;
            out.add_term((it.u, it.q), it.coeff)
                .map_err(|e| Error::Parse(format!("coefficients do not sum: {e}")))?;
        }
        Ok(out)
    }
}

impl fmt::Display for EqKClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((u, q), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{u};{q}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for EqKClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {self}", self.ctx)
    }
}

/// Λ^c V = Σ_{a+b=c} Λ^a U ⊗ Λ^b (V/U).
pub fn lambda_v_class(ctx: GrContext, c: usize) -> Result<EqKClass> {
    if c > ctx.n() {
        return Err(Error::Precondition(format!("exterior power {c} of a rank-{} space", ctx.n())));
    }
    let mut out = EqKClass::zero(ctx);
    for a in c.saturating_sub(ctx.q_rank())..=c.min(ctx.k()) {
        let u = Diagram::new(vec![1; a])?;
        let q = Diagram::new(vec![1; c - a])?;
        out.add_term((u, q), 1)?;
    }
    Ok(out)
}

/// χ(a, b) extended bilinearly from irreducibles.
pub fn chi(a: &EqKClass, b: &EqKClass) -> Result<BigInt> {
    a.check_ctx(b)?;
    let ctx = a.ctx;
    let mut total = BigInt::zero();
    for (ta, ca) in a.irreducibles() {
        for (tb, cb) in b.irreducibles() {
            total += ctx.euler_chi(&ta, &tb)? * BigInt::from(ca) * BigInt::from(cb);
        }
    }
    Ok(total)
}

/// χ_G(a, b) extended bilinearly from irreducibles.
pub fn chi_g(a: &EqKClass, b: &EqKClass) -> Result<i64> {
    a.check_ctx(b)?;
    let ctx = a.ctx;
    let mut total = 0i64;
    for (ta, ca) in a.irreducibles() {
        for (tb, cb) in b.irreducibles() {
            let v = ctx.euler_chi_g(&ta, &tb)?;
            let term = v
                .checked_mul(ca)
                .and_then(|x| x.checked_mul(cb))
                .ok_or(Error::Overflow("equivariant euler pairing"))?;
            total = total.checked_add(term).ok_or(Error::Overflow("equivariant euler pairing"))?;
        }
    }
    Ok(total)
}

/// U^{−λ} = Σ^λ U^* for λ ∈ Y_{n−k,k}, in enumeration order.
pub fn kapranov_basis(ctx: GrContext) -> Vec<Diagram> {
    enumerate_box(BoxSpec::new(ctx.q_rank(), ctx.k()))
}

pub fn kapranov_object(ctx: GrContext, lambda: &Diagram) -> Result<TwistedIrred> {
    let u = GlWeight::from_diagram(lambda, ctx.k())?.dual().to_diagram();
    Ok(TwistedIrred::new(u, Diagram::empty(), 0))
}

/// Gram matrix G[μ][λ] = χ(U^{−μ}, U^{−λ}) over the Kapranov basis.
#[derive(Clone, Debug)]
pub struct KapranovGram {
    pub basis: Vec<Diagram>,
    pub probes: Vec<TwistedIrred>,
    pub gram: Vec<Vec<BigInt>>,
}

static GRAMS: Lazy<DashMap<GrContext, Arc<KapranovGram>>> = Lazy::new(DashMap::new);
type CoordKey = (GrContext, TermKey);
static IRR_COORDS: Lazy<DashMap<CoordKey, Arc<Vec<BigInt>>>> = Lazy::new(DashMap::new);

/// Builds (or fetches) the Gram matrix and checks it is upper unitriangular.
pub fn kapranov_gram(ctx: GrContext) -> Result<Arc<KapranovGram>> {
    if let Some(g) = GRAMS.get(&ctx) {
        return Ok(g.clone());
    }
    let basis = kapranov_basis(ctx);
    let probes = basis.iter().map(|l| kapranov_object(ctx, l)).collect::<Result<Vec<_>>>()?;
    let mut gram = Vec::with_capacity(basis.len());
    for (i, p) in probes.iter().enumerate() {
        let mut row = Vec::with_capacity(basis.len());
        for (j, q) in probes.iter().enumerate() {
            let v = ctx.euler_chi(p, q)?;
            if (i == j && !v.is_one()) || (j < i && !v.is_zero()) {
                return Err(Error::Internal(format!(
                    "Kapranov Gram matrix on {ctx} is not unitriangular at ({}, {}): {v}",
                    basis[i], basis[j]
                )));
            }
            row.push(v);
        }
        gram.push(row);
    }
    let g = Arc::new(KapranovGram { basis, probes, gram });
    Ok(GRAMS.entry(ctx).or_insert(g).clone())
}

/// Coordinates of a class in the basis [U^{−λ}], λ ∈ Y_{n−k,k}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KapranovCoords {
    pub ctx: GrContext,
    pub coords: Vec<BigInt>,
}

impl KapranovCoords {
    pub fn labelled(&self) -> Vec<(Diagram, BigInt)> {
        kapranov_basis(self.ctx).into_iter().zip(self.coords.iter().cloned()).collect()
    }
}

fn solve_upper_unitriangular(gram: &[Vec<BigInt>], rhs: Vec<BigInt>) -> Vec<BigInt> {
    let n = rhs.len();
    let mut x = rhs;
    for i in (0..n).rev() {
        let mut acc = x[i].clone();
        for j in i + 1..n {
            if !gram[i][j].is_zero() {
                acc -= &gram[i][j] * &x[j];
            }
        }
        x[i] = acc;
    }
    x
}

fn irreducible_coords(ctx: GrContext, key: &TermKey) -> Result<Arc<Vec<BigInt>>> {
    let memo_key = (ctx, key.clone());
    if let Some(v) = IRR_COORDS.get(&memo_key) {
        return Ok(v.clone());
    }
    let g = kapranov_gram(ctx)?;
    let target = TwistedIrred::new(key.0.clone(), key.1.clone(), 0);
    let rhs = g.probes.iter().map(|p| ctx.euler_chi(p, &target)).collect::<Result<Vec<_>>>()?;
    let x = Arc::new(solve_upper_unitriangular(&g.gram, rhs));
    Ok(IRR_COORDS.entry(memo_key).or_insert(x).clone())
}

pub fn kapranov_coordinates(a: &EqKClass) -> Result<KapranovCoords> {
    let ctx = a.ctx;
    let size = kapranov_basis(ctx).len();
    let mut coords = vec![BigInt::zero(); size];
    for (key, &c) in &a.terms {
        let x = irreducible_coords(ctx, key)?;
        for (slot, v) in coords.iter_mut().zip(x.iter()) {
            *slot += v * c;
        }
    }
    Ok(KapranovCoords { ctx, coords })
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant of the Kapranov-coordinate matrix; ±1 iff the classes form a Z-basis of K₀.
pub fn collection_determinant(ctx: GrContext, classes: &[EqKClass]) -> Result<BigInt> {
    let size = kapranov_basis(ctx).len();
    if classes.len() != size {
        return Err(Error::CountMismatch { expected: size, found: classes.len() });
    }
    let rows = classes
        .iter()
        .map(|c| {
            if c.ctx != ctx {
                return Err(Error::Precondition(format!("class on {} in a collection on {ctx}", c.ctx)));
            }
            Ok(kapranov_coordinates(c)?.coords)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(bareiss_determinant(rows))
}

/// Row-style Hermite normal form of the Z-span of `rows` (zero rows dropped).
/// Two row sets span the same lattice iff their forms coincide.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == m.len() {
            break;
        }
        // Euclid on the column below pivot_row
        loop {
            let nz: Vec<usize> = (pivot_row..m.len()).filter(|&r| !m[r][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by_key(|&&r| m[r][col].abs()).expect("nonempty");
            m.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = &m[r][col] / &m[pivot_row][col];
                let pivot = m[pivot_row].clone();
                for (x, p) in m[r].iter_mut().zip(pivot.iter()) {
                    *x -= &q * p;
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col].is_zero() {
            continue;
        }
        if m[pivot_row][col].is_negative() {
            for x in m[pivot_row].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot = m[pivot_row].clone();
        for row in m.iter_mut().take(pivot_row) {
            let q = floor_div(&row[col], &pivot[col]);
            if !q.is_zero() {
                for (x, p) in row.iter_mut().zip(pivot.iter()) {
                    *x -= &q * p;
                }
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.div_floor(b)
}

/// Coordinates of classes over the union of their supports (for equivariant lattice comparisons).
pub fn support_matrix(classes: &[&EqKClass]) -> Vec<Vec<BigInt>> {
    let keys: Vec<&TermKey> = {
        let mut ks: Vec<&TermKey> = classes.iter().flat_map(|c| c.terms.keys()).collect();
        ks.sort();
        ks.dedup();
        ks
    };
    classes
        .iter()
        .map(|c| keys.iter().map(|k| BigInt::from(c.terms.get(*k).copied().unwrap_or(0))).collect())
        .collect()
}

/// Whether two families of equivariant classes span the same sublattice.
pub fn same_equivariant_lattice(a: &[EqKClass], b: &[EqKClass]) -> bool {
    let all: Vec<&EqKClass> = a.iter().chain(b.iter()).collect();
    let m = support_matrix(&all);
    let (ma, mb) = m.split_at(a.len());
    hermite_normal_form(ma) == hermite_normal_form(mb)
}

pub fn clear_kapranov_memo() {
    GRAMS.clear();
    IRR_COORDS.clear();
}
