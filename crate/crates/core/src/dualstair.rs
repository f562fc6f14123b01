//! The exceptional bundles E^{λ,μ} of a block, computed as equivariant K-classes
//! by three independent routes, and the four kinds of staircase complexes.
//!
//! Within a block Bl_{w,h} = Y_{w,h} × Y_{k−h,n−k−w} the irreducible objects are
//! irr(α,β) = U^α ⊗ (V/U)^{−β}. E^{λ,μ} is characterised by
//! χ_G(irr(α,β), E^{λ,μ}) = δ and can also be pushed forward from either
//! partial flag variety Fl(k−h,k;V) or Fl(k,n−w;V).

use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::bottweil::{push_inner, BbwResult, LeviWeight};
use crate::error::{Error, Result};
use crate::grcore::{band_cuts, contains, cyclic_shift, enumerate_box, subdiagrams, twist, BoxSpec, Diagram};
use crate::homcalc::{GrContext, TwistedIrred};
use crate::kclass::{chi_g, lambda_v_class, EqKClass};
use crate::littlewood::{skew_expand, tensor_decompose, GlWeight};
use crate::pathblocks::HalfPoint;

/// A block Bl_{w,h} on Gr(k,n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockContext {
    pub ctx: GrContext,
    pub w: usize,
    pub h: usize,
}

impl BlockContext {
    /// Accepts 0 ≤ w ≤ n−k and 0 ≤ h ≤ k; boundary values give degenerate blocks.
    pub fn new(ctx: GrContext, w: usize, h: usize) -> Result<Self> {
        if w > ctx.q_rank() || h > ctx.k() {
            return Err(Error::Precondition(format!("block ({w},{h}) outside {ctx}")));
        }
        Ok(BlockContext { ctx, w, h })
    }

    /// The block at an integer point p = (x, y): w = n−k−x, h = y.
    pub fn at_point(ctx: GrContext, p: HalfPoint) -> Result<Self> {
        if !p.inside(&ctx) {
            return Err(Error::PointOutside(p.to_string()));
        }
        if !p.x_is_int() || !p.y_is_int() {
            return Err(Error::Precondition(format!("block point {p} must be integral")));
        }
        Self::new(ctx, ctx.q_rank() - p.floor_x() as usize, p.floor_y() as usize)
    }

    /// 0 < w < n−k and 0 < h < k.
    pub fn is_admissible(&self) -> bool {
        0 < self.w && self.w < self.ctx.q_rank() && 0 < self.h && self.h < self.ctx.k()
    }

    pub fn lambda_box(&self) -> BoxSpec {
        BoxSpec::new(self.w, self.h)
    }

    pub fn mu_box(&self) -> BoxSpec {
        BoxSpec::new(self.ctx.k() - self.h, self.ctx.q_rank() - self.w)
    }

    /// Block pairs, lexicographic in (λ order, μ order); this refines (⊆, ⊆).
    pub fn pairs(&self) -> Vec<(Diagram, Diagram)> {
        let mus = enumerate_box(self.mu_box());
        enumerate_box(self.lambda_box())
            .into_iter()
            .flat_map(|l| mus.iter().map(move |m| (l.clone(), m.clone())))
            .collect()
    }

    pub fn contains_pair(&self, lambda: &Diagram, mu: &Diagram) -> bool {
        lambda.fits(self.lambda_box()) && mu.fits(self.mu_box())
    }

    fn check_pair(&self, lambda: &Diagram, mu: &Diagram) -> Result<()> {
        if !self.contains_pair(lambda, mu) {
            return Err(Error::Precondition(format!("({lambda},{mu}) is not in {self}")));
        }
        Ok(())
    }
}

impl fmt::Display for BlockContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bl_{{{},{}}} on {}", self.w, self.h, self.ctx)
    }
}

/// U^α ⊗ (V/U)^{−β}.
pub fn irr(ctx: GrContext, alpha: &Diagram, beta: &Diagram) -> Result<TwistedIrred> {
    let q = GlWeight::from_diagram(beta, ctx.q_rank())?.dual().to_diagram();
    GlWeight::from_diagram(alpha, ctx.k())?;
    Ok(TwistedIrred::new(alpha.clone(), q, 0))
}

fn irr_class(ctx: GrContext, alpha: &Diagram, beta: &Diagram) -> Result<EqKClass> {
    EqKClass::class_of(ctx, &irr(ctx, alpha, beta)?)
}

fn pairing_matrix(ctx: GrContext, objs: &[TwistedIrred], what: &str) -> Result<Vec<Vec<i64>>> {
    let mut m = vec![vec![0i64; objs.len()]; objs.len()];
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            let v = ctx.euler_chi_g(a, b)?;
            if (i == j && v != 1) || (j < i && v != 0) {
                return Err(Error::Internal(format!(
                    "{what}: χ_G({a}, {b}) = {v} breaks unitriangularity on {ctx}"
                )));
            }
            m[i][j] = v;
        }
    }
    Ok(m)
}

/// M[(α,β),(γ,δ)] = χ_G(irr(α,β), irr(γ,δ)) over the block, asserted upper unitriangular.
pub fn gram_equivariant(bc: &BlockContext) -> Result<Vec<Vec<i64>>> {
    let objs = bc
        .pairs()
        .iter()
        .map(|(a, b)| irr(bc.ctx, a, b))
        .collect::<Result<Vec<_>>>()?;
    pairing_matrix(bc.ctx, &objs, &format!("Gram matrix of {bc}"))
}

type EKey = (GrContext, Diagram, Diagram);
static E_GRAM: Lazy<DashMap<EKey, Arc<EqKClass>>> = Lazy::new(DashMap::new);

/// E^{λ,μ} from the dual-collection conditions on the downset {γ ⊆ λ} × {δ ⊆ μ}.
pub fn e_class_gram(bc: &BlockContext, lambda: &Diagram, mu: &Diagram) -> Result<EqKClass> {
    bc.check_pair(lambda, mu)?;
    let key = (bc.ctx, lambda.clone(), mu.clone());
    if let Some(c) = E_GRAM.get(&key) {
        return Ok(c.as_ref().clone());
    }
    let ctx = bc.ctx;
    let gammas = subdiagrams(lambda);
    let deltas = subdiagrams(mu);
    let down: Vec<(Diagram, Diagram)> = gammas
        .iter()
        .flat_map(|g| deltas.iter().map(move |d| (g.clone(), d.clone())))
        .collect();
    let objs = down.iter().map(|(g, d)| irr(ctx, g, d)).collect::<Result<Vec<_>>>()?;
    let m = pairing_matrix(ctx, &objs, &format!("downset of ({lambda},{mu})"))?;
    let n = down.len();
    let mut c = vec![0i64; n];
    for i in (0..n).rev() {
        let mut acc: i64 = if i == n - 1 { 1 } else { 0 };
        for j in i + 1..n {
            let t = m[i][j].checked_mul(c[j]).ok_or(Error::Overflow("Gram solve"))?;
            acc = acc.checked_sub(t).ok_or(Error::Overflow("Gram solve"))?;
        }
        c[i] = acc;
    }
    let mut out = EqKClass::zero(ctx);
    for ((g, d), &ci) in down.iter().zip(&c) {
        if ci != 0 {
            out = out.add_scaled(&irr_class(ctx, g, d)?, ci)?;
        }
    }
    Ok(E_GRAM.entry(key).or_insert(Arc::new(out)).as_ref().clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Route {
    Gram,
    PushP,
    PushF,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Route::Gram => "gram",
            Route::PushP => "push-p",
            Route::PushF => "push-f",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gram" => Ok(Route::Gram),
            "push-p" | "p" => Ok(Route::PushP),
            "push-f" | "f" => Ok(Route::PushF),
            _ => Err(Error::Parse(format!("unknown route {s:?} (gram, push-p, push-f)"))),
        }
    }
}

/// Instance-level record that every summand pushed forward has no higher direct image.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub summands: usize,
    pub vanishing: usize,
    pub failures: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, r: &BbwResult, what: impl FnOnce() -> String) -> Option<Vec<i64>> {
        self.summands += 1;
        match r {
            BbwResult::Vanishing => {
                self.vanishing += 1;
                None
            }
            BbwResult::Cohomology { degree: 0, dominant } => Some(dominant.clone()),
            BbwResult::Cohomology { degree, dominant } => {
                self.failures.push(format!("{}: R^{degree} = {dominant:?}", what()));
                None
            }
        }
    }
}

fn require_admissible(bc: &BlockContext, route: Route) -> Result<()> {
    let ok = match route {
        Route::PushP => 0 < bc.h && bc.h < bc.ctx.k(),
        Route::PushF => 0 < bc.w && bc.w < bc.ctx.q_rank(),
        Route::Gram => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("route {route} needs a non-degenerate {bc}")))
    }
}

fn add_mult(out: &mut EqKClass, ctx: GrContext, u: &GlWeight, q: &GlWeight, mult: u64) -> Result<()> {
    let m = i64::try_from(mult).map_err(|_| Error::Overflow("push-forward multiplicity"))?;
    *out = out.add_scaled(&EqKClass::irreducible(ctx, u, q)?, m)?;
    Ok(())
}

/// p_*((U/W)^λ ⊗ (V/W)^{−μ}) along Fl(k−h,k;V) → Gr(k,V).
pub fn e_class_push_p(bc: &BlockContext, lambda: &Diagram, mu: &Diagram) -> Result<(EqKClass, Certificate)> {
    bc.check_pair(lambda, mu)?;
    require_admissible(bc, Route::PushP)?;
    let ctx = bc.ctx;
    let (k, h, m) = (ctx.k(), bc.h, ctx.q_rank());
    let lam = GlWeight::from_diagram(lambda, h)?;
    let mut out = EqKClass::zero(ctx);
    let mut cert = Certificate::default();
    // (V/W)^{−μ} is filtered by (V/U)^{−ν} ⊗ (U/W)^{−μ/ν}
    for nu in subdiagrams(mu) {
        let q = GlWeight::from_diagram(&nu, m)?.dual();
        for (alpha, m1) in &skew_expand(mu, &nu)?.terms {
            let alpha = Diagram::new(alpha.clone())?;
            if alpha.len() > h {
                continue;
            }
            let alpha_dual = GlWeight::from_diagram(&alpha, h)?.dual();
            for (beta, m2) in &tensor_decompose(&lam, &alpha_dual)?.terms {
                let inner = LeviWeight::new(vec![GlWeight::new(beta.clone())?, GlWeight::zero(k - h)]);
                let r = push_inner(&[h, k - h], &inner)?;
                let what = || format!("ν={nu} α={alpha} β={beta:?}");
                if let Some(u) = cert.record(&r, what) {
                    add_mult(&mut out, ctx, &GlWeight::new(u)?, &q, m1 * m2)?;
                }
            }
        }
    }
    Ok((out, cert))
}

/// f_*((K/U)^{−μ} ⊗ K^λ) along Fl(k,n−w;V) → Gr(k,V).
pub fn e_class_push_f(bc: &BlockContext, lambda: &Diagram, mu: &Diagram) -> Result<(EqKClass, Certificate)> {
    bc.check_pair(lambda, mu)?;
    require_admissible(bc, Route::PushF)?;
    let ctx = bc.ctx;
    let (k, w) = (ctx.k(), bc.w);
    let mk = ctx.q_rank() - w;
    let mu_dual = GlWeight::from_diagram(mu, mk)?.dual();
    let mut out = EqKClass::zero(ctx);
    let mut cert = Certificate::default();
    // K^λ is filtered by U^α ⊗ (K/U)^{λ/α}
    for alpha in subdiagrams(lambda) {
        let u = GlWeight::from_diagram(&alpha, k)?;
        for (gamma, m1) in &skew_expand(lambda, &alpha)?.terms {
            let gamma = Diagram::new(gamma.clone())?;
            if gamma.len() > mk {
                continue;
            }
            let g = GlWeight::from_diagram(&gamma, mk)?;
            for (beta, m2) in &tensor_decompose(&mu_dual, &g)?.terms {
                let inner = LeviWeight::new(vec![GlWeight::zero(w), GlWeight::new(beta.clone())?]);
                let r = push_inner(&[w, mk], &inner)?;
                let what = || format!("α={alpha} γ={gamma} β={beta:?}");
                if let Some(q) = cert.record(&r, what) {
                    add_mult(&mut out, ctx, &u, &GlWeight::new(q)?, m1 * m2)?;
                }
            }
        }
    }
    Ok((out, cert))
}

/// E^{λ,μ} by the chosen route. Degenerate blocks give the irreducible irr(λ,μ) directly.
pub fn e_class(bc: &BlockContext, lambda: &Diagram, mu: &Diagram, route: Route) -> Result<(EqKClass, Option<Certificate>)> {
    bc.check_pair(lambda, mu)?;
    if !bc.is_admissible() && route != Route::Gram {
        return Ok((irr_class(bc.ctx, lambda, mu)?, None));
    }
    match route {
        Route::Gram => Ok((e_class_gram(bc, lambda, mu)?, None)),
        Route::PushP => e_class_push_p(bc, lambda, mu).map(|(c, cert)| (c, Some(cert))),
        Route::PushF => e_class_push_f(bc, lambda, mu).map(|(c, cert)| (c, Some(cert))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StairKind {
    U,
    Q,
    EL,
    EM,
}

impl fmt::Display for StairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StairKind::U => "U-staircase",
            StairKind::Q => "Q-staircase",
            StairKind::EL => "E-staircase-L",
            StairKind::EM => "E-staircase-M",
        };
        write!(f, "{s}")
    }
}

/// One term: `base ⊗ Λ^c V` (or `Λ^c V^*` when `dual_wedge`), or just `base`.
#[derive(Clone, Debug)]
pub struct StairTerm {
    pub label: String,
    pub base: EqKClass,
    pub wedge: Option<usize>,
    pub dual_wedge: bool,
    pub cls: EqKClass,
}

impl StairTerm {
    fn plain(label: String, cls: EqKClass) -> Self {
        StairTerm { label, base: cls.clone(), wedge: None, dual_wedge: false, cls }
    }

    fn wedged(label: String, base: EqKClass, c: usize, dual_wedge: bool) -> Result<Self> {
        let cls = base.mul(&wedge_class(base.ctx(), c, dual_wedge)?)?;
        Ok(StairTerm { label, base, wedge: Some(c), dual_wedge, cls })
    }
}

fn wedge_class(ctx: GrContext, c: usize, dual: bool) -> Result<EqKClass> {
    let l = lambda_v_class(ctx, c)?;
    if dual {
        l.dual()
    } else {
        Ok(l)
    }
}

#[derive(Clone, Debug)]
pub struct StairComplex {
    pub kind: StairKind,
    pub terms: Vec<StairTerm>,
}

impl StairComplex {
    /// Σ (−1)^i [term_i]; `None` for the empty complex.
    pub fn alternating_sum(&self) -> Result<Option<EqKClass>> {
        let Some(first) = self.terms.first() else {
            return Ok(None);
        };
        let mut acc = EqKClass::zero(first.cls.ctx());
        for (i, t) in self.terms.iter().enumerate() {
            acc = acc.add_scaled(&t.cls, if i % 2 == 0 { 1 } else { -1 })?;
        }
        Ok(Some(acc))
    }

    pub fn ranks(&self) -> Result<Vec<BigInt>> {
        self.terms.iter().map(|t| t.cls.rank()).collect()
    }

    pub fn rank_alternation(&self) -> Result<BigInt> {
        Ok(self
            .ranks()?
            .into_iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (i, r)| if i % 2 == 0 { acc + r } else { acc - r }))
    }

    /// The same complex with the exterior power of term `i` raised by one.
    pub fn with_perturbed_wedge(&self, i: usize) -> Result<StairComplex> {
        let mut out = self.clone();
        let t = out
            .terms
            .get_mut(i)
            .ok_or_else(|| Error::Precondition(format!("term {i} out of range")))?;
        let c = t.wedge.ok_or_else(|| Error::Precondition(format!("term {i} has no exterior power")))?;
        let ctx = t.base.ctx();
        let c2 = if c < ctx.n() { c + 1 } else { c - 1 };
        *t = StairTerm::wedged(format!("{} [mutated Λ^{c2}]", t.label), t.base.clone(), c2, t.dual_wedge)?;
        Ok(out)
    }
}

impl fmt::Display for StairComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.terms.iter().map(|t| t.label.as_str()).collect();
        write!(f, "0 → {} → 0", labels.join(" → "))
    }
}

/// Exactness in equivariant K-theory: the alternating sum of the terms vanishes.
pub fn check_exact_k(c: &StairComplex) -> Result<bool> {
    Ok(c.alternating_sum()?.is_none_or(|s| s.is_zero()))
}

fn wedge_label(c: usize, dual: bool) -> String {
    if dual {
        format!("Λ^{c}V^*")
    } else {
        format!("Λ^{c}V")
    }
}

/// 0 → U^λ → U^{λ^{(1)}}⊗Λ^{c₁}V → … → U^{λ^{(n−k)}}⊗Λ^{c_{n−k}}V → U^{λ{1}}(1) → 0.
/// The last twist carries the linearisation det(V/U).
pub fn staircase_u(ctx: GrContext, lambda: &Diagram) -> Result<StairComplex> {
    let bx = BoxSpec::new(ctx.q_rank(), ctx.k());
    let cuts = band_cuts(lambda, bx)?;
    let u_cls = |d: &Diagram| EqKClass::class_of(ctx, &TwistedIrred::new(d.clone(), Diagram::empty(), 0));
    let mut terms = vec![StairTerm::plain(format!("U^{lambda}"), u_cls(lambda)?)];
    for c in &cuts {
        let n = c.removed as usize;
        terms.push(StairTerm::wedged(format!("U^{}⊗{}", c.cut, wedge_label(n, false)), u_cls(&c.cut)?, n, false)?);
    }
    let shifted = cyclic_shift(lambda, bx, 1)?;
    terms.push(StairTerm::plain(format!("U^{shifted}(1)"), u_cls(&shifted)?.twist_weights(0, 1)?));
    Ok(StairComplex { kind: StairKind::U, terms })
}

/// 0 → (V/U)^{−μ} → (V/U)^{−μ^{(1)}}⊗Λ^{c₁}V^* → … → (V/U)^{−μ{1}}(1) → 0, O(1) = det U^*.
pub fn staircase_q(ctx: GrContext, mu: &Diagram) -> Result<StairComplex> {
    let bx = BoxSpec::new(ctx.k(), ctx.q_rank());
    let cuts = band_cuts(mu, bx)?;
    let q_cls = |d: &Diagram| -> Result<EqKClass> {
        let q = GlWeight::from_diagram(d, ctx.q_rank())?.dual().to_diagram();
        EqKClass::class_of(ctx, &TwistedIrred::new(Diagram::empty(), q, 0))
    };
    let mut terms = vec![StairTerm::plain(format!("(V/U)^-{mu}"), q_cls(mu)?)];
    for c in &cuts {
        let n = c.removed as usize;
        terms.push(StairTerm::wedged(format!("(V/U)^-{}⊗{}", c.cut, wedge_label(n, true)), q_cls(&c.cut)?, n, true)?);
    }
    let shifted = cyclic_shift(mu, bx, 1)?;
    terms.push(StairTerm::plain(format!("(V/U)^-{shifted}(1)"), q_cls(&shifted)?.twist(1)?));
    Ok(StairComplex { kind: StairKind::Q, terms })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StairVariant {
    /// λ₁ = w; band cuts of λ.
    L,
    /// μ₁ = k − h; band cuts of μ.
    M,
}

/// E-staircases. L: 0 → E^{λ,μ} → … E^{λ^{(i)},μ}⊗Λ^{c_i}V … → E^{λ{1},μ(1)}(1) → 0 with the
/// end twist det(V/U). M: 0 → E^{λ,μ} → … E^{λ,μ^{(i)}}⊗Λ^{c_i}V^* … → E^{λ(1),μ{1}}(1) → 0 with det U^*.
pub fn staircase_e(bc: &BlockContext, lambda: &Diagram, mu: &Diagram, variant: StairVariant) -> Result<StairComplex> {
    bc.check_pair(lambda, mu)?;
    let ctx = bc.ctx;
    let e = |b: &BlockContext, l: &Diagram, m: &Diagram| e_class_gram(b, l, m);
    let mut terms = vec![StairTerm::plain(format!("E^{{{lambda},{mu}}}"), e(bc, lambda, mu)?)];
    match variant {
        StairVariant::L => {
            let bx = bc.lambda_box();
            for c in band_cuts(lambda, bx)? {
                let n = c.removed as usize;
                let label = format!("E^{{{},{mu}}}⊗{}", c.cut, wedge_label(n, false));
                terms.push(StairTerm::wedged(label, e(bc, &c.cut, mu)?, n, false)?);
            }
            if bc.h == 0 {
                return Err(Error::Precondition(format!("variant L needs h > 0 in {bc}")));
            }
            let l1 = cyclic_shift(lambda, bx, 1)?;
            let m1 = twist(mu, 1, ctx.q_rank() - bc.w)?;
            let next = BlockContext::new(ctx, bc.w, bc.h - 1)?;
            let end = e(&next, &l1, &m1)?.twist_weights(0, 1)?;
            terms.push(StairTerm::plain(format!("E^{{{l1},{m1}}}(1)"), end));
            Ok(StairComplex { kind: StairKind::EL, terms })
        }
        StairVariant::M => {
            let bx = bc.mu_box();
            for c in band_cuts(mu, bx)? {
                let n = c.removed as usize;
                let label = format!("E^{{{lambda},{}}}⊗{}", c.cut, wedge_label(n, true));
                terms.push(StairTerm::wedged(label, e(bc, lambda, &c.cut)?, n, true)?);
            }
            if bc.w == ctx.q_rank() {
                return Err(Error::Precondition(format!("variant M needs w < n−k in {bc}")));
            }
            let l1 = twist(lambda, 1, bc.h)?;
            let m1 = cyclic_shift(mu, bx, 1)?;
            let next = BlockContext::new(ctx, bc.w + 1, bc.h)?;
            let end = e(&next, &l1, &m1)?.twist(1)?;
            terms.push(StairTerm::plain(format!("E^{{{l1},{m1}}}(1)"), end));
            Ok(StairComplex { kind: StairKind::EM, terms })
        }
    }
}

/// Max-width λ ∈ Y_{n−k,k}: the inputs of [`staircase_u`].
pub fn staircase_u_inputs(ctx: GrContext) -> Vec<Diagram> {
    enumerate_box(BoxSpec::new(ctx.q_rank(), ctx.k()))
        .into_iter()
        .filter(|d| d.first() == ctx.q_rank() as i64)
        .collect()
}

/// Max-width μ ∈ Y_{k,n−k}: the inputs of [`staircase_q`].
pub fn staircase_q_inputs(ctx: GrContext) -> Vec<Diagram> {
    enumerate_box(BoxSpec::new(ctx.k(), ctx.q_rank()))
        .into_iter()
        .filter(|d| d.first() == ctx.k() as i64)
        .collect()
}

/// Pairs of the block that admit the given E-staircase.
pub fn staircase_e_inputs(bc: &BlockContext, variant: StairVariant) -> Vec<(Diagram, Diagram)> {
    let k = bc.ctx.k();
    bc.pairs()
        .into_iter()
        .filter(|(l, m)| match variant {
            StairVariant::L => bc.w > 0 && l.first() == bc.w as i64,
            StairVariant::M => bc.h < k && m.first() == (k - bc.h) as i64,
        })
        .collect()
}

/// χ_G(irr(α,β), E^{λ,μ}) over the whole block: the identity matrix when the E-classes
/// form the dual collection.
pub fn dual_pairing_matrix(bc: &BlockContext, es: &[EqKClass]) -> Result<Vec<Vec<i64>>> {
    let ctx = bc.ctx;
    bc.pairs()
        .iter()
        .map(|(a, b)| {
            let probe = irr_class(ctx, a, b)?;
            es.iter().map(|e| chi_g(&probe, e)).collect()
        })
        .collect()
}

/// Whether every term of `e` has U-weight γ ⊆ λ and (V/U)-weight −δ with δ ⊆ μ.
pub fn support_ok(ctx: GrContext, e: &EqKClass, lambda: &Diagram, mu: &Diagram) -> Result<bool> {
    for (u, q) in e.terms().keys() {
        let delta = GlWeight::from_diagram(q, ctx.q_rank())?.dual().to_diagram();
        if !(u.is_partition() && delta.is_partition() && contains(lambda, u) && contains(mu, &delta)) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn clear_e_memo() {
    E_GRAM.clear();
}
