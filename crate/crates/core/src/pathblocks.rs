//! Blocks Bl_p attached to points of the (n−k)×k rectangle, half-integer
//! lattice paths through it, and the decompositions they induce.
//!
//! Coordinates are stored doubled so that half-integers stay exact.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grcore::{enumerate_box, BoxSpec, Diagram};
use crate::homcalc::{GrContext, TwistedIrred};
use crate::littlewood::GlWeight;

/// A point (x2/2, y2/2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfPoint {
    pub x2: i64,
    pub y2: i64,
}

impl HalfPoint {
    pub fn new(x2: i64, y2: i64) -> Self {
        HalfPoint { x2, y2 }
    }

    pub fn integral(x: i64, y: i64) -> Self {
        HalfPoint { x2: 2 * x, y2: 2 * y }
    }

    pub fn x_is_int(&self) -> bool {
        self.x2 % 2 == 0
    }

    pub fn y_is_int(&self) -> bool {
        self.y2 % 2 == 0
    }

    pub fn floor_x(&self) -> i64 {
        self.x2.div_euclid(2)
    }

    pub fn floor_y(&self) -> i64 {
        self.y2.div_euclid(2)
    }

    pub fn ceil_x(&self) -> i64 {
        (self.x2 + 1).div_euclid(2)
    }

    pub fn ceil_y(&self) -> i64 {
        (self.y2 + 1).div_euclid(2)
    }

    pub fn inside(&self, ctx: &GrContext) -> bool {
        (0..=2 * ctx.q_rank() as i64).contains(&self.x2) && (0..=2 * ctx.k() as i64).contains(&self.y2)
    }
}

fn fmt_half(v: i64) -> String {
    if v % 2 == 0 {
        (v / 2).to_string()
    } else {
        format!("{}.5", v.div_euclid(2))
    }
}

fn parse_half(s: &str) -> Result<i64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("coordinate {s:?} is not an integer or half-integer"));
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty() || !int.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let whole: i64 = int.parse().map_err(|_| bad())?;
    let half = match frac.trim_end_matches('0') {
        "" => 0,
        "5" => 1,
        _ => return Err(bad()),
    };
    if !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    whole.checked_mul(2).and_then(|v| v.checked_add(half)).ok_or_else(bad)
}

impl fmt::Display for HalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", fmt_half(self.x2), fmt_half(self.y2))
    }
}

/// `"x,y"` with halves written as `.5`.
impl FromStr for HalfPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = s.split_once(',').ok_or_else(|| Error::Parse(format!("expected \"x,y\", got {s:?}")))?;
        Ok(HalfPoint { x2: parse_half(x)?, y2: parse_half(y)? })
    }
}

/// Bl_p = Y_{⌊n−k−x⌋,⌊y⌋} × Y_{⌊k−y⌋,⌊x⌋}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub point: HalfPoint,
    pub lambda_box: BoxSpec,
    pub mu_box: BoxSpec,
    pub pairs: Vec<(Diagram, Diagram)>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Σ^λU^* ⊗ Σ^μ(V/U) ⊗ O(twist) for every pair, in block order.
    pub fn generators(&self, ctx: &GrContext, twist: i64) -> Result<Vec<TwistedIrred>> {
        self.pairs
            .iter()
            .map(|(l, m)| {
                let u = GlWeight::from_diagram(l, ctx.k())?.dual().to_diagram();
                Ok(TwistedIrred::new(u, m.clone(), twist))
            })
            .collect()
    }
}

/// The two diagram boxes at an arbitrary half-integer point (no crossing-point requirement).
pub fn block_boxes(ctx: &GrContext, p: HalfPoint) -> Result<(BoxSpec, BoxSpec)> {
    if !p.inside(ctx) {
        return Err(Error::PointOutside(p.to_string()));
    }
    let (k, m) = (ctx.k() as i64, ctx.q_rank() as i64);
    let lambda_box = BoxSpec::new((m - p.ceil_x()) as usize, p.floor_y() as usize);
    let mu_box = BoxSpec::new((k - p.ceil_y()) as usize, p.floor_x() as usize);
    Ok((lambda_box, mu_box))
}

pub fn block_at(ctx: &GrContext, p: HalfPoint) -> Result<Block> {
    let (lambda_box, mu_box) = block_boxes(ctx, p)?;
    let mus = enumerate_box(mu_box);
    let pairs = enumerate_box(lambda_box)
        .into_iter()
        .flat_map(|l| mus.iter().map(move |m| (l.clone(), m.clone())))
        .collect();
    Ok(Block { point: p, lambda_box, mu_box, pairs })
}

/// Crossing points p_0 = (0,0), …, p_l = (n−k, k) of a path with the grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalPath {
    points: Vec<HalfPoint>,
}

impl CanonicalPath {
    pub fn points(&self) -> &[HalfPoint] {
        &self.points
    }

    /// l(Γ): number of steps.
    pub fn length(&self) -> usize {
        self.points.len() - 1
    }
}

impl fmt::Display for CanonicalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(HalfPoint::to_string).collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Parses `"0,0;1,0.5;1.5,1;2,2"` into raw points (not yet validated).
pub fn parse_points(s: &str) -> Result<Vec<HalfPoint>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty path".into()));
    }
    s.split(';').map(str::parse).collect()
}

/// One coordinate between consecutive crossing points: strictly increasing without
/// passing an integer, or constant at a non-integer value.
fn coord_step_ok(a2: i64, b2: i64) -> bool {
    if b2 == a2 {
        return a2 % 2 != 0;
    }
    // no even number strictly between a2 and b2
    b2 > a2 && b2 - a2 <= 2 && !(b2 - a2 == 2 && a2 % 2 != 0)
}

fn step_ok(a: HalfPoint, b: HalfPoint) -> bool {
    a != b && coord_step_ok(a.x2, b.x2) && coord_step_ok(a.y2, b.y2)
}

fn step_error(a: HalfPoint, b: HalfPoint) -> String {
    for (name, s, t) in [("x", a.x2, b.x2), ("y", a.y2, b.y2)] {
        if t < s {
            return format!("{name} decreases from {} to {}", fmt_half(s), fmt_half(t));
        }
        if t == s && s % 2 == 0 {
            return format!("{name} stays on the grid line {} between {a} and {b}", fmt_half(s));
        }
        if !coord_step_ok(s, t) {
            return format!("{name}-interval ({}, {}) contains an integer", fmt_half(s), fmt_half(t));
        }
    }
    format!("{a} and {b} coincide")
}

pub fn validate_path(ctx: &GrContext, pts: &[HalfPoint]) -> Result<CanonicalPath> {
    let end = HalfPoint::integral(ctx.q_rank() as i64, ctx.k() as i64);
    if pts.first() != Some(&HalfPoint::new(0, 0)) {
        return Err(Error::InvalidPath("must start at 0,0".into()));
    }
    if pts.last() != Some(&end) {
        return Err(Error::InvalidPath(format!("must end at {end}")));
    }
    for p in pts {
        if !p.inside(ctx) {
            return Err(Error::PointOutside(p.to_string()));
        }
        if !p.x_is_int() && !p.y_is_int() {
            return Err(Error::InvalidPath(format!("{p} has no integer coordinate")));
        }
    }
    for w in pts.windows(2) {
        if !step_ok(w[0], w[1]) {
            return Err(Error::InvalidPath(step_error(w[0], w[1])));
        }
    }
    Ok(CanonicalPath { points: pts.to_vec() })
}

pub fn parse_path(ctx: &GrContext, s: &str) -> Result<CanonicalPath> {
    validate_path(ctx, &parse_points(s)?)
}

/// The canonical path closest to the rectangle's diagonal (total offset, ties broken by point order).
pub fn diagonal_path(ctx: &GrContext) -> CanonicalPath {
    let (w, h) = (ctx.q_rank() as i64, ctx.k() as i64);
    let offset = |p: &CanonicalPath| p.points.iter().map(|q| (q.y2 * w - q.x2 * h).abs()).sum::<i64>();
    enumerate_paths(ctx)
        .into_iter()
        .min_by(|a, b| offset(a).cmp(&offset(b)).then_with(|| a.cmp(b)))
        .expect("the rectangle always has a path")
}

fn successors(ctx: &GrContext, p: HalfPoint) -> Vec<HalfPoint> {
    let (w, h) = (2 * ctx.q_rank() as i64, 2 * ctx.k() as i64);
    let mut out = Vec::new();
    for x2 in p.x2..=(p.x2 + 2).min(w) {
        for y2 in p.y2..=(p.y2 + 2).min(h) {
            let q = HalfPoint::new(x2, y2);
            if (q.x_is_int() || q.y_is_int()) && step_ok(p, q) {
                out.push(q);
            }
        }
    }
    out
}

fn extend(ctx: &GrContext, cur: &mut Vec<HalfPoint>, out: &mut Vec<Vec<HalfPoint>>) {
    let last = *cur.last().expect("path starts at origin");
    if last == HalfPoint::integral(ctx.q_rank() as i64, ctx.k() as i64) {
        out.push(cur.clone());
        return;
    }
    for q in successors(ctx, last) {
        cur.push(q);
        extend(ctx, cur, out);
        cur.pop();
    }
}

fn block_key(ctx: &GrContext, pts: &[HalfPoint]) -> Vec<(BoxSpec, BoxSpec)> {
    pts.iter().map(|&p| block_boxes(ctx, p).expect("points inside")).collect()
}

/// All canonical paths, one per distinct block sequence, sorted by their point lists.
pub fn enumerate_paths(ctx: &GrContext) -> Vec<CanonicalPath> {
    let origin = HalfPoint::new(0, 0);
    let mut all: Vec<Vec<HalfPoint>> = successors(ctx, origin)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut cur = vec![origin, first];
            let mut out = Vec::new();
            extend(ctx, &mut cur, &mut out);
            out
        })
        .collect();
    all.sort();
    let mut seen = std::collections::HashSet::new();
    all.into_iter()
        .filter(|pts| seen.insert(block_key(ctx, pts)))
        .map(|points| CanonicalPath { points })
        .collect()
}

/// ⟨B_{p_0}, B_{p_1}(1), …, B_{p_l}(l)⟩.
pub fn decomposition_of(ctx: &GrContext, path: &CanonicalPath) -> Result<Vec<(Block, i64)>> {
    path.points.iter().enumerate().map(|(i, &p)| Ok((block_at(ctx, p)?, i as i64))).collect()
}

/// All generators of the decomposition, component by component.
pub fn path_generators(ctx: &GrContext, path: &CanonicalPath) -> Result<Vec<Vec<TwistedIrred>>> {
    decomposition_of(ctx, path)?.iter().map(|(b, i)| b.generators(ctx, *i)).collect()
}
