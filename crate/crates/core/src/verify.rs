//! End-to-end checks producing machine-readable reports.
//!
//! Every report lists its work items in a canonical order, so the JSON output
//! does not depend on the rayon pool size.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dualstair::{
    dual_pairing_matrix, e_class, gram_equivariant, irr, staircase_e, staircase_e_inputs, staircase_q,
    staircase_q_inputs, staircase_u, staircase_u_inputs, support_ok, BlockContext, Route, StairComplex,
    StairVariant,
};
use crate::error::{Error, Result};
use crate::grcore::contains;
use crate::homcalc::{GrContext, TwistedIrred};
use crate::kclass::{chi, collection_determinant, hermite_normal_form, kapranov_coordinates, same_equivariant_lattice, EqKClass};
use crate::pathblocks::{block_at, decomposition_of, CanonicalPath, HalfPoint};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Counterexample lists in reports are truncated to this many entries.
pub const MAX_EXAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub tool_version: String,
    pub ctx: GrContext,
    pub check: String,
    pub status: Status,
    pub details: Value,
    pub elapsed_millis: u64,
}

impl Report {
    fn new(ctx: GrContext, check: &str, ok: bool, details: Value, start: Instant) -> Self {
        Report {
            tool_version: TOOL_VERSION.into(),
            ctx,
            check: check.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            details,
            elapsed_millis: start.elapsed().as_millis() as u64,
        }
    }

    pub fn error(ctx: GrContext, check: &str, err: &Error) -> Self {
        Report {
            tool_version: TOOL_VERSION.into(),
            ctx,
            check: check.into(),
            status: Status::Error,
            details: json!({ "error": err.to_string() }),
            elapsed_millis: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn counterexamples(&self) -> &[Value] {
        self.details["counterexamples"].as_array().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }

    /// The report without its timing field, for byte-level comparisons.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).unwrap_or(Value::Null);
        if let Some(o) = v.as_object_mut() {
            o.remove("elapsedMillis");
        }
        serde_json::to_string(&v).unwrap_or_default()
    }
}

/// Deliberate corruptions used to confirm that each check can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Exchange the twists of two components of the decomposition.
    TwistSwap { seed: u64 },
    /// Raise one exterior-power multiplicity of one staircase.
    WedgePerturb { seed: u64 },
    /// Replace one generator class by a copy of its predecessor.
    DuplicateClass { seed: u64 },
}

fn truncated(mut v: Vec<Value>) -> Vec<Value> {
    v.truncate(MAX_EXAMPLES);
    v
}

struct PathOutcome {
    details: Value,
    counterexamples: Vec<Value>,
    coords: Vec<Vec<BigInt>>,
    ok: bool,
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn check_path(ctx: GrContext, path: &CanonicalPath, mutation: Option<Mutation>) -> Result<PathOutcome> {
    let comps = decomposition_of(&ctx, path)?;
    let mut twists: Vec<i64> = comps.iter().map(|(_, t)| *t).collect();
    if let Some(Mutation::TwistSwap { seed }) = mutation {
        let m = twists.len();
        if m >= 2 {
            let i = (seed as usize) % (m - 1);
            twists.swap(i, m - 1);
        }
    }
    let gens: Vec<Vec<TwistedIrred>> = comps
        .iter()
        .zip(&twists)
        .map(|((b, _), &t)| b.generators(&ctx, t))
        .collect::<Result<_>>()?;
    let sizes: Vec<usize> = gens.iter().map(Vec::len).collect();
    let total: usize = sizes.iter().sum();
    let expected = binomial(ctx.n(), ctx.k());
    let count_ok = BigInt::from(total) == expected;
    let mut cex = Vec::new();
    if !count_ok {
        cex.push(json!({ "kind": "count", "path": path.to_string(), "expected": expected.to_string(), "found": total }));
    }

    let flat: Vec<&TwistedIrred> = gens.iter().flatten().collect();
    let self_ext: Vec<Option<Value>> = flat
        .par_iter()
        .map(|g| -> Result<Option<Value>> {
            let e = ctx.ext_equivariant(g, g)?;
            let ok = e.len() == 1 && e.get(&0) == Some(&1);
            Ok((!ok).then(|| json!({ "kind": "exceptionality", "object": g.to_string(), "extEquivariant": e })))
        })
        .collect::<Result<_>>()?;
    let exc_failures: Vec<Value> = self_ext.into_iter().flatten().collect();

    let mut pairs = Vec::new();
    for j in 0..gens.len() {
        for i in 0..j {
            for a in &gens[j] {
                for b in &gens[i] {
                    pairs.push((i, j, a, b));
                }
            }
        }
    }
    let cross: Vec<Option<Value>> = pairs
        .par_iter()
        .map(|&(i, j, a, b)| -> Result<Option<Value>> {
            let e = ctx.ext_graded(a, b)?;
            Ok((!e.is_zero()).then(|| {
                json!({ "kind": "cross-ext", "later": j, "earlier": i, "src": a.to_string(), "dst": b.to_string(), "ext": e.to_json() })
            }))
        })
        .collect::<Result<_>>()?;
    let cross_failures: Vec<Value> = cross.into_iter().flatten().collect();

    let mut classes: Vec<EqKClass> = flat.iter().map(|g| EqKClass::class_of(ctx, g)).collect::<Result<_>>()?;
    if let Some(Mutation::DuplicateClass { seed }) = mutation {
        if classes.len() >= 2 {
            let j = 1 + (seed as usize) % (classes.len() - 1);
            classes[j] = classes[j - 1].clone();
        }
    }
    let (det, coords) = if count_ok {
        let coords: Vec<Vec<BigInt>> =
            classes.par_iter().map(|c| Ok(kapranov_coordinates(c)?.coords)).collect::<Result<_>>()?;
        (Some(collection_determinant(ctx, &classes)?), coords)
    } else {
        (None, Vec::new())
    };
    let det_ok = det.as_ref().is_some_and(|d| d.abs().is_one());
    if let Some(d) = det.as_ref().filter(|_| !det_ok) {
        cex.push(json!({ "kind": "determinant", "path": path.to_string(), "determinant": d.to_string() }));
    }

    let ok = count_ok && exc_failures.is_empty() && cross_failures.is_empty() && det_ok;
    let details = json!({
        "path": path.to_string(),
        "sizes": sizes,
        "twists": twists,
        "generators": total,
        "countOk": count_ok,
        "exceptionalFailures": exc_failures.len(),
        "crossPairs": pairs.len(),
        "crossFailures": cross_failures.len(),
        "determinant": det.map(|d| d.to_string()),
        "pass": ok,
    });
    cex.extend(exc_failures);
    cex.extend(cross_failures);
    Ok(PathOutcome { details, counterexamples: cex, coords, ok })
}

/// Count, exceptionality, cross-component Ext vanishing, unimodularity and
/// path-independence of the K-lattice for each given path.
pub fn verify_sod(ctx: GrContext, paths: &[CanonicalPath], mutation: Option<Mutation>) -> Result<Report> {
    let start = Instant::now();
    let outcomes: Vec<PathOutcome> = paths.iter().map(|p| check_path(ctx, p, mutation)).collect::<Result<_>>()?;
    let lattices: Vec<Vec<Vec<BigInt>>> = outcomes
        .iter()
        .filter(|o| !o.coords.is_empty())
        .map(|o| hermite_normal_form(&o.coords))
        .collect();
    let independent = lattices.windows(2).all(|w| w[0] == w[1]);
    let mut cex: Vec<Value> = outcomes.iter().flat_map(|o| o.counterexamples.iter().cloned()).collect();
    if !independent {
        let idx = lattices.windows(2).position(|w| w[0] != w[1]).unwrap_or(0);
        cex.push(json!({ "kind": "lattice", "paths": [paths[idx].to_string(), paths[idx + 1].to_string()] }));
    }
    let ok = outcomes.iter().all(|o| o.ok) && independent && !paths.is_empty();
    let total = cex.len();
    let details = json!({
        "paths": outcomes.iter().map(|o| o.details.clone()).collect::<Vec<_>>(),
        "latticePathIndependent": independent,
        "counterexampleCount": total,
        "counterexamples": truncated(cex),
    });
    Ok(Report::new(ctx, "verify-sod", ok, details, start))
}

/// Ordering verdict for Ext(E_later, E_earlier).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum OrderVerdict {
    /// Every pair of irreducible factors has vanishing Ext.
    Proved,
    /// Sufficient check inconclusive, Euler pairing zero.
    ChiConsistent,
    /// Euler pairing nonzero: Ext cannot vanish.
    Violated,
}

fn order_verdict(ctx: GrContext, later: &EqKClass, earlier: &EqKClass) -> Result<(OrderVerdict, BigInt)> {
    let fl: Vec<TwistedIrred> = later.irreducibles().map(|(t, _)| t).collect();
    let fe: Vec<TwistedIrred> = earlier.irreducibles().map(|(t, _)| t).collect();
    let mut all_vanish = true;
    'outer: for a in &fl {
        for b in &fe {
            if !ctx.ext_vanishes(a, b)? {
                all_vanish = false;
                break 'outer;
            }
        }
    }
    if all_vanish {
        return Ok((OrderVerdict::Proved, BigInt::zero()));
    }
    let c = chi(later, earlier)?;
    Ok((if c.is_zero() { OrderVerdict::ChiConsistent } else { OrderVerdict::Violated }, c))
}

/// Gram triangularity, three-route agreement, nonnegativity, support, the dual pairing,
/// lattice equality and the ordering of the E-collection on the block at `point`.
pub fn verify_block(ctx: GrContext, point: HalfPoint) -> Result<Report> {
    let start = Instant::now();
    let bc = BlockContext::at_point(ctx, point)?;
    let pairs = bc.pairs();
    gram_equivariant(&bc)?;
    let routes: &[Route] = if bc.is_admissible() { &[Route::Gram, Route::PushP, Route::PushF] } else { &[Route::Gram] };

    struct PairOutcome {
        e: EqKClass,
        cex: Vec<Value>,
        certificates: usize,
    }
    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|(l, m)| -> Result<PairOutcome> {
            let mut cex = Vec::new();
            let mut certificates = 0;
            let (g, _) = e_class(&bc, l, m, Route::Gram)?;
            for &r in &routes[1..] {
                let (c, cert) = e_class(&bc, l, m, r)?;
                if let Some(cert) = cert {
                    certificates += 1;
                    for f in &cert.failures {
                        cex.push(json!({ "kind": "certificate", "route": r, "lambda": l, "mu": m, "summand": f }));
                    }
                }
                if c != g {
                    cex.push(json!({ "kind": "route-disagreement", "route": r, "lambda": l, "mu": m,
                        "gram": g.to_json(), "other": c.to_json() }));
                }
            }
            if !bc.is_admissible() && g != EqKClass::class_of(ctx, &irr(ctx, l, m)?)? {
                cex.push(json!({ "kind": "degenerate-not-irreducible", "lambda": l, "mu": m, "class": g.to_json() }));
            }
            if g.terms().values().any(|&c| c < 0) {
                cex.push(json!({ "kind": "negative-coefficient", "lambda": l, "mu": m, "class": g.to_json() }));
            }
            if !support_ok(ctx, &g, l, m)? {
                cex.push(json!({ "kind": "support", "lambda": l, "mu": m, "class": g.to_json() }));
            }
            Ok(PairOutcome { e: g, cex, certificates })
        })
        .collect::<Result<_>>()?;
    let es: Vec<EqKClass> = outcomes.iter().map(|o| o.e.clone()).collect();
    let mut cex: Vec<Value> = outcomes.iter().flat_map(|o| o.cex.iter().cloned()).collect();
    let certificates: usize = outcomes.iter().map(|o| o.certificates).sum();

    let pm = dual_pairing_matrix(&bc, &es)?;
    let mut pairing_identity = true;
    for (i, row) in pm.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != (i == j) as i64 {
                pairing_identity = false;
                cex.push(json!({ "kind": "dual-pairing", "probe": pairs[i], "e": pairs[j], "chiG": v }));
            }
        }
    }

    let gens: Vec<EqKClass> = pairs
        .iter()
        .map(|(a, b)| EqKClass::class_of(ctx, &irr(ctx, a, b)?)?.dual())
        .collect::<Result<_>>()?;
    let duals: Vec<EqKClass> = es.iter().map(EqKClass::dual).collect::<Result<_>>()?;
    let lattice_equal = same_equivariant_lattice(&gens, &duals);
    if !lattice_equal {
        cex.push(json!({ "kind": "lattice", "block": [bc.w, bc.h] }));
    }

    // larger indices first: a total order refining (⊇, ⊇)
    let order: Vec<usize> = (0..pairs.len()).rev().collect();
    let mut jobs = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        jobs.push((i, i));
        for &j in &order[pos + 1..] {
            jobs.push((j, i));
        }
    }
    let verdicts: Vec<(usize, usize, OrderVerdict, BigInt)> = jobs
        .par_iter()
        .map(|&(later, earlier)| {
            if later == earlier {
                let c = chi(&es[later], &es[later])?;
                let v = if c.is_one() { OrderVerdict::ChiConsistent } else { OrderVerdict::Violated };
                return Ok((later, earlier, v, c));
            }
            let (v, c) = order_verdict(ctx, &es[later], &es[earlier])?;
            Ok((later, earlier, v, c))
        })
        .collect::<Result<_>>()?;
    let mut proved = 0;
    let mut chi_only = 0;
    for (later, earlier, v, c) in &verdicts {
        match v {
            OrderVerdict::Proved => proved += 1,
            OrderVerdict::ChiConsistent => chi_only += 1,
            OrderVerdict::Violated => cex.push(json!({ "kind": if later == earlier { "self-chi" } else { "ordering" },
                "later": pairs[*later], "earlier": pairs[*earlier], "chi": c.to_string() })),
        }
    }

    let ok = cex.is_empty();
    let total = cex.len();
    let details = json!({
        "point": point.to_string(),
        "block": { "w": bc.w, "h": bc.h },
        "size": pairs.len(),
        "admissible": bc.is_admissible(),
        "routes": routes,
        "certificates": certificates,
        "pairingIdentity": pairing_identity,
        "latticeEqual": lattice_equal,
        "ordering": { "pairs": verdicts.len(), "proved": proved, "chiLevelOnly": chi_only },
        "counterexampleCount": total,
        "counterexamples": truncated(cex),
    });
    Ok(Report::new(ctx, "verify-block", ok, details, start))
}

/// One staircase instance in canonical order.
#[derive(Clone, Debug)]
pub struct StairInstance {
    pub block: Option<(usize, usize)>,
    pub input: String,
    pub complex: StairComplex,
}

fn e_blocks(ctx: GrContext) -> Result<Vec<BlockContext>> {
    let mut v = Vec::new();
    for w in 1..ctx.q_rank() {
        for h in 1..ctx.k() {
            v.push(BlockContext::new(ctx, w, h)?);
        }
    }
    Ok(v)
}

/// U- and Q-staircases on `ctx` followed by both E-variants on every admissible block
/// (or on `block` alone, when given).
pub fn staircase_instances(ctx: GrContext, block: Option<BlockContext>) -> Result<Vec<StairInstance>> {
    let mut out = Vec::new();
    if block.is_none() {
        for l in staircase_u_inputs(ctx) {
            out.push(StairInstance { block: None, input: l.to_string(), complex: staircase_u(ctx, &l)? });
        }
        for m in staircase_q_inputs(ctx) {
            out.push(StairInstance { block: None, input: m.to_string(), complex: staircase_q(ctx, &m)? });
        }
    }
    let blocks = match block {
        Some(b) => vec![b],
        None => e_blocks(ctx)?,
    };
    for bc in blocks {
        for v in [StairVariant::L, StairVariant::M] {
            let inputs = staircase_e_inputs(&bc, v);
            let made: Vec<StairInstance> = inputs
                .par_iter()
                .map(|(l, m)| {
                    Ok(StairInstance {
                        block: Some((bc.w, bc.h)),
                        input: format!("({l},{m})"),
                        complex: staircase_e(&bc, l, m, v)?,
                    })
                })
                .collect::<Result<_>>()?;
            out.extend(made);
        }
    }
    Ok(out)
}

/// K-exactness and rank alternation of every staircase instance.
pub fn verify_staircase(ctx: GrContext, block: Option<BlockContext>, mutation: Option<Mutation>) -> Result<Report> {
    let start = Instant::now();
    let mut instances = staircase_instances(ctx, block)?;
    if let Some(Mutation::WedgePerturb { seed }) = mutation {
        if !instances.is_empty() {
            let i = (seed as usize) % instances.len();
            instances[i].complex = instances[i].complex.with_perturbed_wedge(1)?;
        }
    }
    let checked: Vec<(bool, BigInt, Option<EqKClass>)> = instances
        .par_iter()
        .map(|s| {
            let sum = s.complex.alternating_sum()?;
            let exact = sum.as_ref().is_none_or(EqKClass::is_zero);
            Ok((exact, s.complex.rank_alternation()?, sum))
        })
        .collect::<Result<_>>()?;
    let mut per_kind = std::collections::BTreeMap::<String, usize>::new();
    let mut cex = Vec::new();
    for (s, (exact, ranks, sum)) in instances.iter().zip(&checked) {
        *per_kind.entry(s.complex.kind.to_string()).or_default() += 1;
        if !*exact || !ranks.is_zero() {
            cex.push(json!({
                "kind": s.complex.kind.to_string(),
                "block": s.block,
                "input": s.input,
                "complex": s.complex.to_string(),
                "alternatingSum": sum.as_ref().map(EqKClass::to_json),
                "rankAlternation": ranks.to_string(),
            }));
        }
    }
    let ok = cex.is_empty();
    let total = cex.len();
    let details = json!({
        "block": block.map(|b| [b.w, b.h]),
        "instances": instances.len(),
        "perKind": per_kind,
        "counterexampleCount": total,
        "counterexamples": truncated(cex),
    });
    Ok(Report::new(ctx, "verify-staircase", ok, details, start))
}

/// Result of testing "Ext_G(irr(γ,δ), irr(α,β)) ≠ 0 iff γ ⊆ α and δ ⊆ β" over a block.
#[derive(Clone, Debug, Default)]
pub struct PatternOutcome {
    pub checked: usize,
    /// Diagonal entries different from {0: 1}.
    pub diagonal: Vec<(String, String)>,
    /// Nonzero without containment.
    pub nonzero_outside: Vec<(String, String)>,
    /// Containment holds but the equivariant Ext is zero.
    pub zero_inside: Vec<(String, String)>,
}

impl PatternOutcome {
    pub fn iff_holds(&self) -> bool {
        self.diagonal.is_empty() && self.nonzero_outside.is_empty() && self.zero_inside.is_empty()
    }

    pub fn forward_holds(&self) -> bool {
        self.diagonal.is_empty() && self.nonzero_outside.is_empty()
    }
}

pub fn equivariant_pattern(bc: &BlockContext) -> Result<PatternOutcome> {
    let ctx = bc.ctx;
    let pairs = bc.pairs();
    let objs: Vec<TwistedIrred> = pairs.iter().map(|(a, b)| irr(ctx, a, b)).collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for i in 0..pairs.len() {
        for j in 0..pairs.len() {
            jobs.push((i, j));
        }
    }
    let rows: Vec<(usize, usize, std::collections::BTreeMap<usize, u64>)> = jobs
        .par_iter()
        .map(|&(i, j)| Ok((i, j, ctx.ext_equivariant(&objs[i], &objs[j])?)))
        .collect::<Result<_>>()?;
    let mut out = PatternOutcome { checked: rows.len(), ..Default::default() };
    for (i, j, e) in rows {
        let label = (objs[i].to_string(), objs[j].to_string());
        let ((g, d), (a, b)) = (&pairs[i], &pairs[j]);
        let inside = contains(a, g) && contains(b, d);
        let nonzero = e.values().any(|&m| m > 0);
        if i == j {
            if !(e.len() == 1 && e.get(&0) == Some(&1)) {
                out.diagonal.push(label);
            }
        } else if nonzero && !inside {
            out.nonzero_outside.push(label);
        } else if !nonzero && inside {
            out.zero_inside.push(label);
        }
    }
    Ok(out)
}

/// Ext(B_{p'}(t), B_p) for p' = p + (t,t) over all integral p; returns (pairs checked, failures).
pub fn diagonal_orthogonality(ctx: GrContext) -> Result<(usize, Vec<(String, String)>)> {
    let (m, k) = (ctx.q_rank() as i64, ctx.k() as i64);
    let mut jobs = Vec::new();
    for x in 0..=m {
        for y in 0..=k {
            for t in 1..=(m - x).min(k - y) {
                let p = block_at(&ctx, HalfPoint::integral(x, y))?;
                let q = block_at(&ctx, HalfPoint::integral(x + t, y + t))?;
                for a in q.generators(&ctx, t)? {
                    for b in p.generators(&ctx, 0)? {
                        jobs.push((a.clone(), b));
                    }
                }
            }
        }
    }
    let bad: Vec<Option<(String, String)>> = jobs
        .par_iter()
        .map(|(a, b)| Ok((!ctx.ext_vanishes(a, b)?).then(|| (a.to_string(), b.to_string()))))
        .collect::<Result<_>>()?;
    Ok((jobs.len(), bad.into_iter().flatten().collect()))
}
