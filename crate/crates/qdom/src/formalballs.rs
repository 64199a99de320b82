//! Formal balls: point–radius pairs over a distance space, the weak and
//! strict ball orders, interpolation and maxima-transfer laws, zero-aperture
//! radius functions with their ideal Hausdorff distances, and the finite
//! Smyth completion built from them.
//!
//! A ball `(x, r)` stands for the set of points within `r` of `x`; shrinking
//! the radius moves a ball *up* the order, so `(x, r) <= (y, s)` holds when
//! `d(x, y) <= r - s`. Families of balls that are closed upward in radius
//! are never materialized: they are represented by their per-point radius
//! threshold (a [`RadiusFn`] for weak membership, a threshold family for
//! strict membership), and every quantifier over the infinite ball space is
//! either resolved in closed form over the finite carrier or exercised over
//! a probe grid fine enough to make the closed form's ray arguments exact.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::continuity::{self, BasisKind, ContinuityKind};
use crate::extval::{ExtVal, Fin, Inf, Rat};
use crate::grel::GRel;
use crate::hyperspace::{self, HausdorffKind};
use crate::space::{mask_of, value_grid_of, DistanceSpace, SpaceError};

/// A formal ball: a point index paired with a finite nonnegative radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FormalBall {
    point: usize,
    radius: ExtVal,
}

impl FormalBall {
    /// Builds a ball, rejecting infinite radii.
    pub fn new(point: usize, radius: ExtVal) -> Result<FormalBall, SpaceError> {
        if !radius.is_finite() {
            return Err(SpaceError::Hypothesis(
                "a formal ball needs a finite radius".into(),
            ));
        }
        Ok(FormalBall { point, radius })
    }

    pub fn point(self) -> usize {
        self.point
    }

    pub fn radius(self) -> ExtVal {
        self.radius
    }
}

/// Unchecked internal constructor; the radius must already be finite.
fn fb(point: usize, radius: ExtVal) -> FormalBall {
    debug_assert!(radius.is_finite());
    FormalBall { point, radius }
}

/// The ball's radius as a plain rational.
fn rad(b: FormalBall) -> Rat {
    b.radius.finite().expect("ball radii are finite")
}

/// Renders a ball as `(label,radius)` for reports and DOT output.
pub fn ball_label(s: &DistanceSpace, b: FormalBall) -> String {
    format!("({},{})", s.label(b.point), b.radius)
}

/// The ball distance `(x,r) d_+ (y,s) = (d(x,y) - r + s)_+`.
pub fn dplus(s: &DistanceSpace, b1: FormalBall, b2: FormalBall) -> ExtVal {
    s.dist(b1.point, b2.point).add(b2.radius).tminus(b1.radius)
}

/// Weak ball order: `(x,r) <= (y,s)` iff `d(x,y) <= r - s`.
pub fn ball_leq(s: &DistanceSpace, b1: FormalBall, b2: FormalBall) -> bool {
    s.dist(b1.point, b2.point).add(b2.radius) <= b1.radius
}

/// Strict ball order: `(x,r) < (y,s)` iff `d(x,y) < r - s`.
///
/// This closed form coincides with the neighbourhood definition of the
/// strict order exactly when [`underline_agreement`] reports that the lower
/// hemimetric of the ball space agrees with the lifted lower hemimetric of
/// the base; it is evaluated as stated regardless.
pub fn ball_lt(s: &DistanceSpace, b1: FormalBall, b2: FormalBall) -> bool {
    s.dist(b1.point, b2.point).add(b2.radius) < b1.radius
}

/// Both ball orders at once: `(weak, strict)`.
pub fn ball_orders(s: &DistanceSpace, b1: FormalBall, b2: FormalBall) -> (bool, bool) {
    (ball_leq(s, b1, b2), ball_lt(s, b1, b2))
}

/// The base distance recovered from the ball order in two ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceRecovery {
    /// `min { r : (x,r) <= (y,0) }`, scanned over the value grid.
    pub weak: ExtVal,
    /// `inf { r : (x,r) < (y,0) }`, the infimum of an open ray.
    pub strict: ExtVal,
}

/// Recovers `d(x, y)` from the ball orders.
///
/// The weak minimum is attained at `r = d(x,y)` itself (or empty when the
/// distance is infinite); the strict set is the open ray above `d(x,y)`,
/// whose infimum is the same value. Probe radii just above and at the
/// distance validate the ray description.
pub fn recovered_distance(s: &DistanceSpace, x: usize, y: usize) -> DistanceRecovery {
    let target = fb(y, ExtVal::ZERO);
    let weak = ExtVal::inf_of(
        s.value_grid()
            .into_iter()
            .filter(|&r| ball_leq(s, fb(x, r), target)),
    );
    let strict = match s.dist(x, y) {
        Inf => Inf,
        d => {
            debug_assert!(ball_lt(s, fb(x, d.add(ExtVal::int(1))), target));
            debug_assert!(!ball_lt(s, fb(x, d), target));
            d
        }
    };
    DistanceRecovery { weak, strict }
}

// ---------------------------------------------------------------------------
// Signed extended values
// ---------------------------------------------------------------------------

/// Extended rationals with both infinities, for untruncated suprema of
/// differences and for solving radius constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum SignedExt {
    NegInf,
    Val(Rat),
    PosInf,
}

use SignedExt::{NegInf, PosInf, Val};

impl SignedExt {
    fn zero() -> SignedExt {
        Val(Rat::from_integer(0))
    }

    fn of(v: ExtVal) -> SignedExt {
        match v {
            Fin(r) => Val(r),
            Inf => PosInf,
        }
    }

    fn plus_rat(self, r: Rat) -> SignedExt {
        match self {
            Val(v) => Val(v + r),
            other => other,
        }
    }

    /// Truncation to `[0, inf]`.
    fn truncated(self) -> ExtVal {
        match self {
            NegInf => ExtVal::ZERO,
            Val(v) => nonneg(v),
            PosInf => Inf,
        }
    }
}

/// Clamps a signed rational to `[0, inf)`.
fn nonneg(r: Rat) -> ExtVal {
    if r < Rat::from_integer(0) {
        ExtVal::ZERO
    } else {
        Fin(r)
    }
}

/// The least `g` for which `a <= b + g` holds, as a signed extended value:
/// the constraint is satisfiable for exactly the `g` at or above the gap.
/// `NegInf` means every `g` works (in particular `inf <= inf + g`), `PosInf`
/// that none does.
fn signed_gap(a: ExtVal, b: ExtVal) -> SignedExt {
    match (a, b) {
        (Fin(x), Fin(y)) => Val(x - y),
        (Inf, Fin(_)) => PosInf,
        (_, Inf) => NegInf,
    }
}

// ---------------------------------------------------------------------------
// Lower/upper hemimetrics of the ball space
// ---------------------------------------------------------------------------

/// Whether the lower hemimetric of the ball space agrees with the lifted
/// lower hemimetric of the base, decided by the finite criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnderlineAgreement {
    /// For every `y, z` the untruncated supremum `sup_x (d(x,y) - d(x,z))`
    /// is nonnegative. A difference of two infinite entries imposes no
    /// constraint and is skipped as a supremum candidate; a finite entry
    /// minus an infinite one counts as negative infinity.
    pub criterion: bool,
    /// Every column attains zero (`0 ∘ d = 0` on a finite carrier).
    pub initial: bool,
}

/// Evaluates the agreement criterion and initiality of the base space.
pub fn underline_agreement(s: &DistanceSpace) -> UnderlineAgreement {
    let n = s.n();
    let criterion = (0..n).all(|y| {
        (0..n).all(|z| {
            (0..n)
                .map(|x| signed_gap(s.dist(x, y), s.dist(x, z)))
                .fold(NegInf, SignedExt::max)
                >= SignedExt::zero()
        })
    });
    let initial = (0..n).all(|y| (0..n).any(|x| s.dist(x, y).is_zero()));
    UnderlineAgreement { criterion, initial }
}

/// Lower hemimetric of the ball distance, exactly: the supremum over all
/// balls `(x, u)` of `((x,u) d_+ b2 - (x,u) d_+ b1)_+`, with the supremum
/// over the radius `u` resolved per point in closed form.
pub fn ball_lower_distance(s: &DistanceSpace, b1: FormalBall, b2: FormalBall) -> ExtVal {
    let (z, t) = (b1.point, rad(b1));
    let (y, sr) = (b2.point, rad(b2));
    ExtVal::sup_of((0..s.n()).map(|x| match (s.dist(x, y), s.dist(x, z)) {
        (Inf, Fin(_)) => Inf,
        (Inf, Inf) | (Fin(_), Inf) => ExtVal::ZERO,
        (Fin(a), Fin(b)) => nonneg(a - b + sr - t),
    }))
}

/// Upper hemimetric of the ball distance, exactly: the supremum over all
/// balls `(w, u)` of `(b1 d_+ (w,u) - b2 d_+ (w,u))_+`, radius supremum in
/// closed form.
pub fn ball_upper_distance(s: &DistanceSpace, b1: FormalBall, b2: FormalBall) -> ExtVal {
    let (x, r) = (b1.point, rad(b1));
    let (z, t) = (b2.point, rad(b2));
    ExtVal::sup_of((0..s.n()).map(|w| match (s.dist(x, w), s.dist(z, w)) {
        (Inf, Fin(_)) => Inf,
        (Inf, Inf) | (Fin(_), Inf) => ExtVal::ZERO,
        (Fin(a), Fin(b)) => nonneg(a - b - r + t),
    }))
}

/// The base space's lower hemimetric lifted to balls.
pub fn lifted_lower_distance(s: &DistanceSpace, b1: FormalBall, b2: FormalBall) -> ExtVal {
    s.lower_hemimetric()
        .get(b1.point, b2.point)
        .add(b2.radius)
        .tminus(b1.radius)
}

/// The base space's upper hemimetric lifted to balls.
pub fn lifted_upper_distance(s: &DistanceSpace, b1: FormalBall, b2: FormalBall) -> ExtVal {
    s.upper_hemimetric()
        .get(b1.point, b2.point)
        .add(b2.radius)
        .tminus(b1.radius)
}

/// Sampled comparison of the ball space's hemimetrics against the lifted
/// hemimetrics of the base.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderTransferReport {
    pub samples: usize,
    /// Ball lower distance below lifted lower distance on every sampled pair.
    pub lower_dominated: bool,
    /// Ball upper distance below lifted upper distance on every sampled pair.
    pub upper_dominated: bool,
    /// The lower pair agreed on every sampled pair and on the designed
    /// separating pairs; this matches the agreement criterion.
    pub lower_agreement: bool,
    pub criterion: bool,
}

impl OrderTransferReport {
    pub fn all_hold(&self) -> bool {
        self.lower_dominated && self.upper_dominated && self.lower_agreement == self.criterion
    }
}

/// Compares the ball hemimetrics with the lifted ones on sampled ball pairs,
/// plus one designed pair per base pair violating the agreement criterion
/// (radius chosen inside the violation margin, where the two lower distances
/// must separate).
pub fn order_transfer_check(s: &DistanceSpace, seed: u64, samples: usize) -> OrderTransferReport {
    let n = s.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = s.value_grid();
    let mut lower_dominated = true;
    let mut upper_dominated = true;
    let mut lower_agreement = true;
    for _ in 0..samples {
        let b1 = sample_ball(&mut rng, n, &grid);
        let b2 = sample_ball(&mut rng, n, &grid);
        lower_dominated &= ball_lower_distance(s, b1, b2) <= lifted_lower_distance(s, b1, b2);
        upper_dominated &= ball_upper_distance(s, b1, b2) <= lifted_upper_distance(s, b1, b2);
        lower_agreement &= ball_lower_distance(s, b1, b2) == lifted_lower_distance(s, b1, b2);
    }
    for y in 0..n {
        for z in 0..n {
            let sup = (0..n)
                .map(|x| signed_gap(s.dist(x, y), s.dist(x, z)))
                .fold(NegInf, SignedExt::max);
            let sigma = match sup {
                NegInf => Fin(Rat::from_integer(1)),
                Val(v) if v < Rat::from_integer(0) => Fin(-v / Rat::from_integer(2)),
                _ => continue,
            };
            let b1 = fb(z, ExtVal::ZERO);
            let b2 = fb(y, sigma);
            lower_dominated &= ball_lower_distance(s, b1, b2) <= lifted_lower_distance(s, b1, b2);
            lower_agreement &= ball_lower_distance(s, b1, b2) == lifted_lower_distance(s, b1, b2);
        }
    }
    OrderTransferReport {
        samples,
        lower_dominated,
        upper_dominated,
        lower_agreement,
        criterion: underline_agreement(s).criterion,
    }
}

fn sample_ball(rng: &mut ChaCha8Rng, n: usize, grid: &[ExtVal]) -> FormalBall {
    fb(
        rng.random_range(0..n),
        grid[rng.random_range(0..grid.len())],
    )
}

// ---------------------------------------------------------------------------
// Interpolation laws
// ---------------------------------------------------------------------------

/// Outcomes of the two interpolation identities on sampled instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterpolationReport {
    /// The agreement criterion held, so the closed-form strict order is the
    /// neighbourhood strict order and the identities carry their intended
    /// reading.
    pub applicable: bool,
    pub samples: usize,
    /// The infimum of `(t - r)_+` over radii `t` strictly below every member
    /// of the sampled family equals the pointwise supremum of `d_+` into it.
    pub pointwise_sup_matches: bool,
    /// Strict comparisons factor through a strictly smaller radius at the
    /// same point, with the midpoint as witness.
    pub strict_factorization: bool,
}

impl InterpolationReport {
    pub fn all_hold(&self) -> bool {
        self.pointwise_sup_matches && self.strict_factorization
    }
}

/// Checks the interpolation identities on sampled balls and families.
///
/// For a ball `b = (x, r)` and a finite family `Y`, a radius `t` puts
/// `(x, t)` strictly below every member exactly when `t` exceeds
/// `M = sup_{(y,s) in Y} (d(x,y) + s)`; the infimum of `(t - r)_+` over that
/// open ray is `(M - r)_+`, and the pointwise supremum of `d_+` from `b`
/// into `Y` is the same value. Probes at `M` and just above validate the
/// ray description on each sample.
pub fn interpolation_laws(s: &DistanceSpace, seed: u64, samples: usize) -> InterpolationReport {
    let n = s.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = s.value_grid();
    let mut pointwise = true;
    let mut strict = true;
    for _ in 0..samples {
        let b = sample_ball(&mut rng, n, &grid);
        let k = rng.random_range(0..=3usize);
        let fam: Vec<FormalBall> = (0..k).map(|_| sample_ball(&mut rng, n, &grid)).collect();
        let m = ExtVal::sup_of(fam.iter().map(|g| s.dist(b.point, g.point).add(g.radius)));
        match m {
            Fin(_) => {
                let above = fb(b.point, m.add(ExtVal::int(1)));
                pointwise &= fam.iter().all(|g| ball_lt(s, above, *g));
                if !fam.is_empty() {
                    let at = fb(b.point, m);
                    pointwise &= !fam.iter().all(|g| ball_lt(s, at, *g));
                }
            }
            Inf => {
                pointwise &= grid
                    .iter()
                    .all(|&t| !fam.iter().all(|g| ball_lt(s, fb(b.point, t), *g)));
            }
        }
        let left = m.tminus(b.radius);
        let right = ExtVal::sup_of(fam.iter().map(|g| dplus(s, b, *g)));
        pointwise &= left == right;

        let b2 = sample_ball(&mut rng, n, &grid);
        if ball_lt(s, b, b2) {
            let lo = s.dist(b.point, b2.point).add(b2.radius);
            let t = lo.midpoint(b.radius);
            strict &= t < b.radius && ball_lt(s, fb(b.point, t), b2);
        } else {
            strict &= grid
                .iter()
                .all(|&t| !(t < b.radius && ball_lt(s, fb(b.point, t), b2)));
        }
    }
    InterpolationReport {
        applicable: underline_agreement(s).criterion,
        samples,
        pointwise_sup_matches: pointwise,
        strict_factorization: strict,
    }
}

/// Searches for a ball strictly above every member of `f` and strictly
/// below `target`: a point `z` admits one exactly when
/// `d(z, target) + target_radius` is strictly under every `g_radius -
/// d(g, z)`; the witness radius is the midpoint of that open interval.
pub fn interpolation_witness(
    s: &DistanceSpace,
    f: &[FormalBall],
    target: FormalBall,
) -> Option<FormalBall> {
    for z in 0..s.n() {
        let lo = s.dist(z, target.point).add(target.radius);
        let hi = f
            .iter()
            .map(|g| signed_gap(g.radius, s.dist(g.point, z)))
            .fold(PosInf, SignedExt::min);
        if SignedExt::of(lo) < hi {
            let t = match hi {
                PosInf => lo.add(ExtVal::int(1)),
                Val(h) => lo.midpoint(Fin(h)),
                NegInf => unreachable!("nothing is below negative infinity"),
            };
            let w = fb(z, t);
            debug_assert!(f.iter().all(|g| ball_lt(s, *g, w)));
            debug_assert!(ball_lt(s, w, target));
            return Some(w);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Maxima of ball families
// ---------------------------------------------------------------------------

/// Probe radii that make ray-inclusion arguments exact for the given balls:
/// every entry value, every involved radius and point-to-ball sum, their
/// consecutive midpoints, and one value beyond the maximum.
fn probe_grid(s: &DistanceSpace, extra: impl IntoIterator<Item = ExtVal>) -> Vec<ExtVal> {
    value_grid_of(s.d().entries().chain(extra))
}

/// Distance maximum of a finite ball family, by the closed form: every
/// member weakly below the candidate, and for every point `v` the infimum
/// of `d(v, y) + s` over members `(y, s)` at or under `d(v, m) + u` for the
/// candidate `(m, u)`. The radius quantifier of the second condition
/// resolves to this point-indexed comparison.
pub fn finite_dist_max(s: &DistanceSpace, fam: &[FormalBall], m: FormalBall) -> bool {
    fam.iter().all(|g| ball_leq(s, *g, m))
        && (0..s.n()).all(|v| {
            ExtVal::inf_of(fam.iter().map(|g| s.dist(v, g.point).add(g.radius)))
                <= s.dist(v, m.point).add(m.radius)
        })
}

/// Strict-order maximum of a finite ball family, closed form: every member
/// strictly below the candidate, and the same ray-inclusion condition as
/// the distance maximum (for each point `v`, the balls strictly below the
/// candidate form the open ray above `d(v, m) + u`, which must sit inside
/// the union of the members' rays).
pub fn finite_strict_max(s: &DistanceSpace, fam: &[FormalBall], m: FormalBall) -> bool {
    fam.iter().all(|g| ball_lt(s, *g, m))
        && (0..s.n()).all(|v| {
            ExtVal::inf_of(fam.iter().map(|g| s.dist(v, g.point).add(g.radius)))
                <= s.dist(v, m.point).add(m.radius)
        })
}

/// The strict-order maximum property evaluated by definition over a probe
/// set: every member strictly below the candidate, and every probe strictly
/// below the candidate strictly below some member.
pub fn finite_strict_max_probes(
    s: &DistanceSpace,
    fam: &[FormalBall],
    m: FormalBall,
    probes: &[FormalBall],
) -> bool {
    fam.iter().all(|g| ball_lt(s, *g, m))
        && probes
            .iter()
            .all(|w| !ball_lt(s, *w, m) || fam.iter().any(|g| ball_lt(s, *w, *g)))
}

/// All probe balls relevant to a family/candidate pair.
fn probes_for(s: &DistanceSpace, fam: &[FormalBall], m: FormalBall) -> Vec<FormalBall> {
    let mut vals: Vec<ExtVal> = fam.iter().map(|g| g.radius).collect();
    vals.push(m.radius);
    for v in 0..s.n() {
        for g in fam {
            vals.push(s.dist(v, g.point).add(g.radius));
        }
        vals.push(s.dist(v, m.point).add(m.radius));
    }
    let grid = probe_grid(s, vals);
    (0..s.n())
        .flat_map(|v| grid.iter().map(move |&u| fb(v, u)))
        .collect()
}

/// Maxima agreement on sampled families and candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallMaximaReport {
    /// The agreement criterion held (hypothesis of the transfer laws).
    pub applicable: bool,
    pub samples: usize,
    /// A strict-order maximum was a distance maximum on every sample.
    pub strict_implies_dist: bool,
    /// The probe-based strict evaluation agreed with the closed form.
    pub probe_consistency: bool,
    /// The designed singleton `{(a, u+1)}` with candidate `(a, u+1)` at a
    /// reflexive point `a` is a distance maximum but not a strict-order
    /// maximum, so the plain converse fails; `None` when the space has no
    /// reflexive point to stage it on.
    pub converse_fails_on_singleton: Option<bool>,
    /// Strictly-directed threshold families examined for the conditional
    /// converse.
    pub directed_families: usize,
    /// On those, the strict-order and distance maxima coincided (shared
    /// closed form, probe-validated) for the constructed maximum and for
    /// sampled candidates.
    pub directed_agreement: bool,
}

impl BallMaximaReport {
    pub fn all_hold(&self) -> bool {
        self.strict_implies_dist
            && self.probe_consistency
            && self.converse_fails_on_singleton.unwrap_or(true)
            && self.directed_agreement
    }
}

/// Checks maxima transfer between the strict ball order and the ball
/// distance.
///
/// The forward direction (strict-order maximum implies distance maximum) is
/// asserted on sampled finite families. The converse is staged where it
/// belongs: finite nonempty families are never strictly directed (their
/// least-radius member would need a member strictly above it), and the
/// designed singleton exhibits the failure, while strictly-directed
/// threshold families — where the two maxima notions provably coincide —
/// are checked for exact agreement.
pub fn ball_maxima_check(s: &DistanceSpace, seed: u64, samples: usize) -> BallMaximaReport {
    let n = s.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = s.value_grid();
    let mut strict_implies_dist = true;
    let mut probe_consistency = true;
    for _ in 0..samples {
        let k = rng.random_range(1..=3usize);
        let fam: Vec<FormalBall> = (0..k).map(|_| sample_ball(&mut rng, n, &grid)).collect();
        let m = if rng.random_range(0..2) == 0 {
            sample_ball(&mut rng, n, &grid)
        } else {
            // Aim for a candidate that is actually above the family: pick a
            // point and the largest radius its strict upper bounds allow.
            let v = rng.random_range(0..n);
            let hi = fam
                .iter()
                .map(|g| signed_gap(g.radius, s.dist(g.point, v)))
                .fold(PosInf, SignedExt::min);
            match hi {
                Val(h) if h > Rat::from_integer(0) => fb(v, Fin(h / Rat::from_integer(2))),
                PosInf => fb(v, ExtVal::ZERO),
                _ => sample_ball(&mut rng, n, &grid),
            }
        };
        let strict = finite_strict_max(s, &fam, m);
        let dist = finite_dist_max(s, &fam, m);
        strict_implies_dist &= !strict || dist;
        let probes = probes_for(s, &fam, m);
        probe_consistency &= finite_strict_max_probes(s, &fam, m, &probes) == strict;
    }

    let converse_fails_on_singleton = (0..n).find(|&a| s.dist(a, a).is_zero()).map(|a| {
        let b = fb(a, ExtVal::int(1));
        finite_dist_max(s, &[b], b) && !finite_strict_max(s, &[b], b)
    });

    let families = representable_families(s);
    let mut directed_agreement = true;
    for f in &families {
        let cand = threshold_max_candidate(s, f);
        directed_agreement &= match cand {
            Some(m) => {
                let ok = threshold_max(s, f, m);
                let probes = threshold_probes(s, f, m);
                ok && threshold_strict_max_probes(s, f, m, &probes)
            }
            None => false,
        };
        for _ in 0..4 {
            let m = sample_ball(&mut rng, n, &grid);
            let closed = threshold_max(s, f, m);
            let probes = threshold_probes(s, f, m);
            directed_agreement &= threshold_strict_max_probes(s, f, m, &probes) == closed;
        }
    }

    BallMaximaReport {
        applicable: underline_agreement(s).criterion,
        samples,
        strict_implies_dist,
        probe_consistency,
        converse_fails_on_singleton,
        directed_families: families.len(),
        directed_agreement,
    }
}

// ---------------------------------------------------------------------------
// Threshold families (strict-membership ideals and generated cones)
// ---------------------------------------------------------------------------

/// A family of balls closed upward in radius with *strict* membership:
/// the members at a point `y` are exactly the balls `(y, u)` with
/// `tau(y) < u`. Ideals generated by Cauchy sequences take this shape with
/// `tau` the limit distances, and the strictly-below cone of a finite
/// generator set takes it with `tau` the pointwise minimum of the shifted
/// generator columns.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ThresholdFamily {
    tau: Vec<ExtVal>,
}

impl ThresholdFamily {
    fn generated(s: &DistanceSpace, generators: &[FormalBall]) -> ThresholdFamily {
        let tau = (0..s.n())
            .map(|z| {
                ExtVal::inf_of(
                    generators
                        .iter()
                        .map(|g| s.dist(z, g.point).add(g.radius)),
                )
            })
            .collect();
        ThresholdFamily { tau }
    }

    fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.tau.len()).filter(|&y| self.tau[y].is_finite())
    }

    /// Internal directedness witness: a support point `w` with
    /// `d(y, w) + tau(w) <= tau(y)` for every support point `y`, so the
    /// members at `w` eventually dominate every member.
    fn directed_witness(&self, s: &DistanceSpace) -> Option<usize> {
        self.support().find(|&w| {
            self.support()
                .all(|y| s.dist(y, w).add(self.tau[w]) <= self.tau[y])
        })
    }
}

/// The shared closed form for both maximum notions over a threshold family:
/// `d(y, m) + u <= tau(y)` on the support (members at `y` approach `tau(y)`
/// from above, so both the weak and strict comparisons against all of them
/// reduce to this), and the ray-inclusion condition per point.
fn threshold_max(s: &DistanceSpace, f: &ThresholdFamily, m: FormalBall) -> bool {
    f.support()
        .all(|y| s.dist(y, m.point).add(m.radius) <= f.tau[y])
        && (0..s.n()).all(|z| {
            ExtVal::inf_of((0..s.n()).map(|y| s.dist(z, y).add(f.tau[y])))
                <= s.dist(z, m.point).add(m.radius)
        })
}

/// A member of the family strictly above the probe `w`, constructed
/// exactly: a point `y` admits one when `d(w, y) + tau(y) < w_radius`, and
/// the midpoint radius witnesses it. (Members exist at every radius
/// strictly over the threshold, so the witness search must not be limited
/// to a radius grid.)
fn member_strictly_above(
    s: &DistanceSpace,
    f: &ThresholdFamily,
    w: FormalBall,
) -> Option<FormalBall> {
    (0..s.n()).find_map(|y| {
        let (Fin(d), Fin(t0)) = (s.dist(w.point, y), f.tau[y]) else {
            return None;
        };
        let hi = rad(w) - d;
        if t0 < hi {
            let g = fb(y, Fin(t0).midpoint(Fin(hi)));
            debug_assert!(f.tau[y] < g.radius && ball_lt(s, w, g));
            Some(g)
        } else {
            None
        }
    })
}

/// Probe-based strict-maximum evaluation over a threshold family: the
/// members compared against the candidate are the probes strictly over
/// their point's threshold, and each probe strictly under the candidate
/// must sit strictly under an exactly constructed member.
fn threshold_strict_max_probes(
    s: &DistanceSpace,
    f: &ThresholdFamily,
    m: FormalBall,
    probes: &[FormalBall],
) -> bool {
    probes
        .iter()
        .filter(|b| f.tau[b.point] < b.radius)
        .all(|g| ball_lt(s, *g, m))
        && probes.iter().all(|w| {
            !ball_lt(s, *w, m) || member_strictly_above(s, f, *w).is_some()
        })
}

/// Probe balls for a threshold family/candidate pair: thresholds, candidate
/// radius, point-to-threshold and point-to-candidate sums, entries,
/// midpoints, and one value beyond.
fn threshold_probes(s: &DistanceSpace, f: &ThresholdFamily, m: FormalBall) -> Vec<FormalBall> {
    let mut vals: Vec<ExtVal> = f.tau.clone();
    vals.push(m.radius);
    for z in 0..s.n() {
        for y in 0..s.n() {
            vals.push(s.dist(z, y).add(f.tau[y]));
        }
        vals.push(s.dist(z, m.point).add(m.radius));
    }
    let grid = probe_grid(s, vals);
    (0..s.n())
        .flat_map(|v| grid.iter().map(move |&u| fb(v, u)))
        .collect()
}

/// Constructs a maximum of a threshold family when one exists: a point `v`
/// works when the least radius forced by ray inclusion fits under the cap
/// forced by the support comparisons, and the least admissible radius is
/// the witness.
fn threshold_max_candidate(s: &DistanceSpace, f: &ThresholdFamily) -> Option<FormalBall> {
    for v in 0..s.n() {
        let cap = f
            .support()
            .map(|y| signed_gap(f.tau[y], s.dist(y, v)))
            .fold(PosInf, SignedExt::min);
        let need = (0..s.n())
            .map(|z| {
                let reach = ExtVal::inf_of((0..s.n()).map(|y| s.dist(z, y).add(f.tau[y])));
                signed_gap(reach, s.dist(z, v))
            })
            .fold(NegInf, SignedExt::max);
        let u = need.max(SignedExt::zero());
        if u <= cap {
            if let Val(_) = u {
                let m = fb(v, u.truncated());
                debug_assert!(threshold_max(s, f, m));
                return Some(m);
            }
        }
    }
    None
}

/// The representable strictly-directed families over a space: ideals of
/// Cauchy sequences (threshold = the limit distances, one per distinct
/// zero-clique column) and directed cones generated by small ball sets.
fn representable_families(s: &DistanceSpace) -> Vec<ThresholdFamily> {
    let n = s.n();
    let mut families: Vec<ThresholdFamily> = Vec::new();
    let mut seen: Vec<Vec<ExtVal>> = Vec::new();
    for clique in s.zero_cliques() {
        let rep = crate::space::members(clique).next().expect("cliques are nonempty");
        let tau: Vec<ExtVal> = (0..n).map(|y| s.dist(y, rep)).collect();
        if !seen.contains(&tau) {
            seen.push(tau.clone());
            let f = ThresholdFamily { tau };
            debug_assert!(f.directed_witness(s).is_some());
            families.push(f);
        }
    }
    let mut gens: Vec<Vec<FormalBall>> = Vec::new();
    for x in 0..n {
        gens.push(vec![fb(x, ExtVal::ZERO)]);
        gens.push(vec![fb(x, ExtVal::int(1))]);
        for y in (x + 1)..n {
            gens.push(vec![fb(x, ExtVal::ZERO), fb(y, ExtVal::ZERO)]);
        }
    }
    for g in gens {
        let f = ThresholdFamily::generated(s, &g);
        if f.directed_witness(s).is_some() && !seen.contains(&f.tau) {
            seen.push(f.tau.clone());
            families.push(f);
        }
    }
    families
}

// ---------------------------------------------------------------------------
// Domain transfer between the base space and the ball space
// ---------------------------------------------------------------------------

/// Completeness and continuity on the base space versus their order
/// counterparts on the ball space, restricted to representable families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallDomainTransfer {
    pub agreement: UnderlineAgreement,
    pub base_complete: bool,
    pub base_continuous: bool,
    pub base_initial: bool,
    /// Every representable strictly-directed family has a strict-order
    /// maximum.
    pub ball_complete: bool,
    /// Strict interpolation into each point through its cone of strictly
    /// bigger balls passes at the critical shrink step.
    pub ball_continuous: bool,
    pub representable_ideals: usize,
    pub generated_families: usize,
    /// `base_complete == ball_complete`; only claimed under the agreement
    /// criterion, which the completeness transfer law assumes.
    pub completeness_transfer: Option<bool>,
    /// `base_continuous == (ball_continuous && base_initial)`.
    pub continuity_transfer: bool,
}

impl BallDomainTransfer {
    pub fn all_hold(&self) -> bool {
        self.completeness_transfer.unwrap_or(true) && self.continuity_transfer
    }
}

/// Evaluates both sides of the completeness and continuity transfer laws.
pub fn ball_domain_transfer(s: &DistanceSpace) -> Result<BallDomainTransfer, SpaceError> {
    s.check_size()?;
    let agreement = underline_agreement(s);
    let base_complete = continuity::is_complete(s, ContinuityKind::Smyth)?;
    let base_continuous = continuity::is_continuous(s, ContinuityKind::Smyth)?;
    let families = representable_families(s);
    let ideals = s
        .zero_cliques()
        .iter()
        .map(|&c| {
            let rep = crate::space::members(c).next().unwrap();
            (0..s.n()).map(|y| s.dist(y, rep)).collect::<Vec<_>>()
        })
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let ball_complete = families.iter().all(|f| {
        threshold_max_candidate(s, f).is_some_and(|m| threshold_max(s, f, m))
    });
    let ball_continuous = designed_interpolation_passes(s);
    Ok(BallDomainTransfer {
        agreement,
        base_complete,
        base_continuous,
        base_initial: agreement.initial,
        ball_complete,
        ball_continuous,
        representable_ideals: ideals,
        generated_families: families.len() - ideals,
        completeness_transfer: agreement
            .criterion
            .then_some(base_complete == ball_complete),
        continuity_transfer: base_continuous == (ball_continuous && agreement.initial),
    })
}

/// The finite-column gap `g(z, y) = min { d(x,y) - d(x,z) : d(x,y) finite }`
/// (signed; empty minimum is positive infinity).
fn column_gap(s: &DistanceSpace, z: usize, y: usize) -> SignedExt {
    (0..s.n())
        .filter(|&x| s.dist(x, y).is_finite())
        .map(|x| signed_gap(s.dist(x, y), s.dist(x, z)))
        .fold(PosInf, SignedExt::min)
}

/// Strict interpolation into each point `y` through the cone of balls
/// strictly above `(y, 0)`'s finite-column approximants, at the critical
/// shrink step: a point `z` interpolates when `d(z, y) < eps + g(z, y)`,
/// and `eps` is set to half the least positive margin `d(z,y) - g(z,y)` so
/// the verdict equals the limit over all positive shrinks.
fn designed_interpolation_passes(s: &DistanceSpace) -> bool {
    let n = s.n();
    let mut least: Option<Rat> = None;
    for z in 0..n {
        for y in 0..n {
            if let (Fin(dzy), Val(g)) = (s.dist(z, y), column_gap(s, z, y)) {
                let mu = dzy - g;
                if mu > Rat::from_integer(0) && least.is_none_or(|m| mu < m) {
                    least = Some(mu);
                }
            }
        }
    }
    let eps = least.map_or(Rat::from_integer(1), |m| m / Rat::from_integer(2));
    (0..n).all(|y| {
        (0..n).any(|z| SignedExt::of(s.dist(z, y)) < column_gap(s, z, y).plus_rat(eps))
    })
}

// ---------------------------------------------------------------------------
// The Kostanek–Waszkiewicz-style biconditional and its hemimetric reduction
// ---------------------------------------------------------------------------

/// Both sides of the domain-transfer biconditional for a distance paired
/// with a candidate lower distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KwReport {
    pub base_domain: bool,
    /// The companion distance is exactly the lower hemimetric of the base.
    pub e_matches_lower: bool,
    pub ball_complete: bool,
    pub ball_continuous: bool,
    /// Upper threshold below lower threshold for the strict ball order
    /// (the order-theoretic predomain condition on the ball space).
    pub ball_predomain: bool,
    /// The companion's weak ball order is the lower relation of the strict
    /// ball order, via the derived thresholds.
    pub order_identity: bool,
    /// Sampled probe evaluation of the lower relation agreed with its
    /// threshold closed form.
    pub probe_consistency: bool,
}

impl KwReport {
    pub fn left(&self) -> bool {
        self.base_domain && self.e_matches_lower
    }

    pub fn right(&self) -> bool {
        self.ball_complete && self.ball_continuous && self.ball_predomain && self.order_identity
    }

    pub fn holds(&self) -> bool {
        self.left() == self.right() && self.probe_consistency
    }
}

/// The least `gamma` with `d(x,y) <= d(x,z) + gamma` for all `x`: the lower
/// threshold of the strict ball order. `(z,t)` is lower-related to `(y,s)`
/// exactly when `t - s` is at or above this.
fn lower_threshold(s: &DistanceSpace, z: usize, y: usize) -> SignedExt {
    (0..s.n())
        .map(|x| signed_gap(s.dist(x, y), s.dist(x, z)))
        .fold(NegInf, SignedExt::max)
}

/// The least `gamma` with `s - d(y,v) <= t - d(z,v)` over the points `v`
/// the cone at `(y, s)` can actually reach (finite `d(y, v)`): the upper
/// threshold of the strict ball order in the limit of large `s`.
fn upper_threshold(s: &DistanceSpace, z: usize, y: usize) -> SignedExt {
    (0..s.n())
        .filter(|&v| s.dist(y, v).is_finite())
        .map(|v| signed_gap(s.dist(z, v), s.dist(y, v)))
        .fold(NegInf, SignedExt::max)
}

/// Evaluates the biconditional: the base is a Smyth domain with companion
/// `e` the lower hemimetric, if and only if the ball space is a strict-order
/// domain on representables whose lower relation is the companion's weak
/// ball order.
pub fn kw_check(
    sd: &DistanceSpace,
    se: &DistanceSpace,
    seed: u64,
    samples: usize,
) -> Result<KwReport, SpaceError> {
    if sd.labels() != se.labels() {
        return Err(SpaceError::Hypothesis(
            "the two distances must share a carrier".into(),
        ));
    }
    let n = sd.n();
    let base_domain = continuity::is_domain(sd, ContinuityKind::Smyth)?;
    let e_matches_lower = *se.d() == sd.lower_hemimetric();
    let transfer = ball_domain_transfer(sd)?;
    let mut ball_predomain = true;
    let mut order_identity = true;
    for z in 0..n {
        for y in 0..n {
            let lo = lower_threshold(sd, z, y);
            if lo != PosInf {
                ball_predomain &= upper_threshold(sd, z, y) <= lo;
            }
            order_identity &= lo == SignedExt::of(se.dist(z, y));
        }
    }
    let mut probe_consistency = true;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = sd.value_grid();
    for _ in 0..samples {
        let b1 = sample_ball(&mut rng, n, &grid);
        let b2 = sample_ball(&mut rng, n, &grid);
        let closed =
            SignedExt::Val(rad(b1) - rad(b2)) >= lower_threshold(sd, b1.point, b2.point);
        let mut vals: Vec<ExtVal> = vec![b1.radius, b2.radius];
        for v in 0..n {
            vals.push(sd.dist(v, b1.point).add(b1.radius));
            vals.push(sd.dist(v, b2.point).add(b2.radius));
        }
        let probes = probe_grid(sd, vals);
        let probed = (0..n).all(|v| {
            probes
                .iter()
                .all(|&u| !ball_lt(sd, fb(v, u), b1) || ball_lt(sd, fb(v, u), b2))
        });
        probe_consistency &= closed == probed;
    }
    Ok(KwReport {
        base_domain,
        e_matches_lower,
        ball_complete: transfer.ball_complete,
        ball_continuous: transfer.ball_continuous,
        ball_predomain,
        order_identity,
        probe_consistency,
    })
}

/// The hemimetric reduction: for a hemimetric base, Smyth completeness of
/// the base is equivalent to the ball space being a strict-order domain on
/// representables. Errors when the base is not a hemimetric.
pub fn romaguera_valero_check(s: &DistanceSpace) -> Result<bool, SpaceError> {
    if !s.is_hemimetric() {
        return Err(SpaceError::Hypothesis(
            "the reduction applies to hemimetric spaces only".into(),
        ));
    }
    let transfer = ball_domain_transfer(s)?;
    let mut ball_predomain = true;
    for z in 0..s.n() {
        for y in 0..s.n() {
            let lo = lower_threshold(s, z, y);
            if lo != PosInf {
                ball_predomain &= upper_threshold(s, z, y) <= lo;
            }
        }
    }
    let left = continuity::is_complete(s, ContinuityKind::Smyth)?;
    Ok(left == (transfer.ball_complete && transfer.ball_continuous && ball_predomain))
}

// ---------------------------------------------------------------------------
// Radius functions: zero-aperture ideals
// ---------------------------------------------------------------------------

/// A zero-aperture round ideal of balls, stored as its per-point infimum
/// radius: the ideal's members are the balls `(x, r)` with `rho(x) <= r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RadiusFn {
    rho: Vec<ExtVal>,
}

impl RadiusFn {
    /// Validates roundness (`rho(x) <= d(x,y) + rho(y)`) and zero aperture
    /// (`min rho = 0`).
    pub fn new(s: &DistanceSpace, rho: Vec<ExtVal>) -> Result<RadiusFn, SpaceError> {
        if rho.len() != s.n() {
            return Err(SpaceError::Hypothesis(
                "radius function length must match the point count".into(),
            ));
        }
        for x in 0..s.n() {
            for y in 0..s.n() {
                if rho[x] > s.dist(x, y).add(rho[y]) {
                    return Err(SpaceError::Hypothesis(format!(
                        "radius function is not round at ({}, {})",
                        s.label(x),
                        s.label(y)
                    )));
                }
            }
        }
        if ExtVal::inf_of(rho.iter().copied()) != ExtVal::ZERO {
            return Err(SpaceError::Hypothesis(
                "radius function must have zero aperture".into(),
            ));
        }
        Ok(RadiusFn { rho })
    }

    /// The ideal of a single point: `rho(y) = d(y, x)`. Fails when the
    /// point's column does not attain zero (the ideal would have positive
    /// aperture).
    pub fn point_ideal(s: &DistanceSpace, x: usize) -> Result<RadiusFn, SpaceError> {
        RadiusFn::new(s, (0..s.n()).map(|y| s.dist(y, x)).collect())
    }

    pub fn get(&self, x: usize) -> ExtVal {
        self.rho[x]
    }

    pub fn values(&self) -> &[ExtVal] {
        &self.rho
    }

    /// Weak membership: `(x, r)` belongs to the ideal iff `rho(x) <= r`.
    pub fn contains(&self, b: FormalBall) -> bool {
        self.rho[b.point] <= b.radius
    }

    /// `min_x rho(x)`; zero by the invariant.
    pub fn aperture(&self) -> ExtVal {
        ExtVal::inf_of(self.rho.iter().copied())
    }

    /// Label-to-value map for serialization.
    pub fn radius_map(&self, s: &DistanceSpace) -> BTreeMap<String, String> {
        (0..s.n())
            .map(|x| (s.label(x).to_string(), self.rho[x].to_string()))
            .collect()
    }

    /// The ideal's members with radii from the value grid up to `cap`: the
    /// finite stand-in used by the brute-force Hausdorff oracle and the
    /// truncation-recovery check.
    pub fn truncated_balls(&self, cap: ExtVal) -> Vec<FormalBall> {
        let grid = value_grid_of(self.rho.iter().copied().chain([cap]));
        (0..self.rho.len())
            .flat_map(|x| {
                grid.iter()
                    .filter(move |&&r| self.rho[x] <= r && r <= cap)
                    .map(move |&r| fb(x, r))
            })
            .collect()
    }
}

/// Minimum radius of a finite ball set (`inf {} = inf`).
pub fn aperture(balls: &[FormalBall]) -> ExtVal {
    ExtVal::inf_of(balls.iter().map(|b| b.radius))
}

/// Hausdorff distances between two radius-function ideals, in closed form
/// over the finite carrier. Reverse: `min_y max_x (d(x,y) - rho_I(x) +
/// rho_J(y))_+`; classical: `max_x min_y` of the same term. Both are the
/// exact lifts of the corresponding set Hausdorff distances because weak
/// membership attains the per-point extremes at the threshold radii.
pub fn ideal_hausdorff(
    s: &DistanceSpace,
    i: &RadiusFn,
    j: &RadiusFn,
    kind: HausdorffKind,
) -> ExtVal {
    let n = s.n();
    assert_eq!(i.values().len(), n, "ideals must live over the space");
    assert_eq!(j.values().len(), n, "ideals must live over the space");
    let term = |x: usize, y: usize| s.dist(x, y).add(j.get(y)).tminus(i.get(x));
    match kind {
        HausdorffKind::Reverse => {
            ExtVal::inf_of((0..n).map(|y| ExtVal::sup_of((0..n).map(|x| term(x, y)))))
        }
        HausdorffKind::Classical => {
            ExtVal::sup_of((0..n).map(|x| ExtVal::inf_of((0..n).map(|y| term(x, y)))))
        }
    }
}

// ---------------------------------------------------------------------------
// Smyth completion
// ---------------------------------------------------------------------------

/// Verdicts about a finite Smyth completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionReport {
    /// The completion's lower hemimetric is the classical ideal Hausdorff
    /// distance.
    pub lower_matches_classical: bool,
    /// The completion is a Smyth domain.
    pub completion_domain: bool,
    /// The embedded point ideals form a basis of the completion.
    pub embedded_basis: bool,
    pub embedding_contraction: bool,
    pub embedding_isometry: bool,
    pub surjective: bool,
    pub base_predomain: bool,
    pub base_complete: bool,
    pub base_noetherian: bool,
    /// The completion's distance has zero diagonal.
    pub hemimetric_completion: bool,
    /// The classical ideal Hausdorff distance is a hemimetric distance and
    /// the resulting space is Smyth complete.
    pub classical_smyth_complete: bool,
}

impl CompletionReport {
    /// The four equivalent finiteness conditions: the base has no strictly
    /// growing chains of zero-cliques (always true finitely), the classical
    /// ideal space is Smyth complete, the reverse ideal distance is a
    /// hemimetric, and a hemimetric Smyth completion exists.
    pub fn esmyth_finite(&self) -> [bool; 4] {
        [
            self.base_noetherian,
            self.classical_smyth_complete,
            self.hemimetric_completion,
            self.hemimetric_completion && self.completion_domain,
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.lower_matches_classical
            && self.completion_domain
            && self.embedded_basis
            && self.embedding_contraction
            && self.embedding_isometry == self.base_predomain
            && self.surjective == self.base_complete
            && self.esmyth_finite().iter().all(|&b| b)
    }
}

/// A finite Smyth completion: the zero-aperture ideals arising from Cauchy
/// sequences, under the reverse ideal Hausdorff distance, with the point
/// embedding.
#[derive(Debug, Clone)]
pub struct SmythCompletion {
    family: Vec<RadiusFn>,
    space: DistanceSpace,
    embedding: Vec<usize>,
    report: CompletionReport,
}

impl SmythCompletion {
    pub fn family(&self) -> &[RadiusFn] {
        &self.family
    }

    pub fn space(&self) -> &DistanceSpace {
        &self.space
    }

    /// Point index in the base to ideal index in the completion.
    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    pub fn report(&self) -> &CompletionReport {
        &self.report
    }
}

/// Builds the Smyth completion of a Smyth-continuous space.
///
/// Every Cauchy sequence clusters on a zero-clique, and its ideal's radius
/// function is the distance into the clique, so the ideal family is the set
/// of distinct zero-clique columns. Ideals are labelled `[p]` by their
/// least clique representative.
pub fn smyth_completion(s: &DistanceSpace) -> Result<SmythCompletion, SpaceError> {
    s.check_size()?;
    if !continuity::is_continuous(s, ContinuityKind::Smyth)? {
        return Err(SpaceError::NotContinuous);
    }
    let n = s.n();
    let mut reps: BTreeMap<Vec<ExtVal>, usize> = BTreeMap::new();
    for clique in s.zero_cliques() {
        let rep = crate::space::members(clique).next().expect("cliques are nonempty");
        let col: Vec<ExtVal> = (0..n).map(|y| s.dist(y, rep)).collect();
        reps.entry(col)
            .and_modify(|r| *r = (*r).min(rep))
            .or_insert(rep);
    }
    let mut entries: Vec<(Vec<ExtVal>, usize)> = reps.into_iter().collect();
    entries.sort_by_key(|&(_, rep)| rep);
    let family: Vec<RadiusFn> = entries
        .iter()
        .map(|(col, _)| {
            RadiusFn::new(s, col.clone()).expect("clique columns are round with zero aperture")
        })
        .collect();
    let labels: Vec<String> = entries
        .iter()
        .map(|(_, rep)| format!("[{}]", s.label(*rep)))
        .collect();
    let k = family.len();
    let reverse = GRel::from_fn(k, k, |i, j| {
        ideal_hausdorff(s, &family[i], &family[j], HausdorffKind::Reverse)
    });
    let classical = GRel::from_fn(k, k, |i, j| {
        ideal_hausdorff(s, &family[i], &family[j], HausdorffKind::Classical)
    });
    let space = DistanceSpace::new(labels.clone(), reverse)?;
    let embedding: Vec<usize> = (0..n)
        .map(|x| {
            let col: Vec<ExtVal> = (0..n).map(|y| s.dist(y, x)).collect();
            entries
                .iter()
                .position(|(c, _)| *c == col)
                .expect("continuity provides a reflexive twin for every column")
        })
        .collect();
    let embedding_contraction = (0..n).all(|x| {
        (0..n).all(|y| space.dist(embedding[x], embedding[y]) <= s.dist(x, y))
    });
    let embedding_isometry = (0..n).all(|x| {
        (0..n).all(|y| space.dist(embedding[x], embedding[y]) == s.dist(x, y))
    });
    let classical_smyth_complete = match DistanceSpace::new(labels, classical.clone()) {
        Ok(cl) => cl.is_hemimetric() && continuity::is_complete(&cl, ContinuityKind::Smyth)?,
        Err(_) => false,
    };
    let report = CompletionReport {
        lower_matches_classical: space.lower_hemimetric() == classical,
        completion_domain: continuity::is_domain(&space, ContinuityKind::Smyth)?,
        embedded_basis: continuity::is_basis(
            &space,
            mask_of(embedding.iter().copied()),
            BasisKind::Smyth,
        )?,
        embedding_contraction,
        embedding_isometry,
        surjective: (0..k).all(|i| embedding.contains(&i)),
        base_predomain: continuity::is_predomain(s, ContinuityKind::Smyth)?,
        base_complete: continuity::is_complete(s, ContinuityKind::Smyth)?,
        base_noetherian: hyperspace::is_noetherian(s),
        hemimetric_completion: space.is_hemimetric(),
        classical_smyth_complete,
    };
    Ok(SmythCompletion {
        family,
        space,
        embedding,
        report,
    })
}

// ---------------------------------------------------------------------------
// Composition functoriality
// ---------------------------------------------------------------------------

/// Whether lifting to balls preserves composition on sampled pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BfuncReport {
    pub samples: usize,
    /// The composite ball distance equals the minimum over middle points of
    /// the two lifted distances at the derived optimal middle radius
    /// `t = e(z, y) + s`.
    pub optimal_middle_attains: bool,
    /// No grid middle radius beats the composite value.
    pub grid_never_beats: bool,
}

impl BfuncReport {
    pub fn all_hold(&self) -> bool {
        self.optimal_middle_attains && self.grid_never_beats
    }
}

/// Checks that the ball lift preserves composition: `(d ∘ e)_+` equals the
/// pointwise composition of the lifts, with the optimal middle radius
/// attaining the minimum and grid radii never beating it.
pub fn bfunc_check(
    sd: &DistanceSpace,
    se: &DistanceSpace,
    seed: u64,
    samples: usize,
) -> Result<BfuncReport, SpaceError> {
    if sd.labels() != se.labels() {
        return Err(SpaceError::Hypothesis(
            "the two distances must share a carrier".into(),
        ));
    }
    let n = sd.n();
    let comp = sd.d().compose(se.d());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = value_grid_of(sd.d().entries().chain(se.d().entries()));
    let mut optimal = true;
    let mut never_beats = true;
    for _ in 0..samples {
        let b1 = sample_ball(&mut rng, n, &grid);
        let b2 = sample_ball(&mut rng, n, &grid);
        let lhs = comp.get(b1.point, b2.point).add(b2.radius).tminus(b1.radius);
        let rhs = ExtVal::inf_of((0..n).filter(|&z| se.dist(z, b2.point).is_finite()).map(
            |z| {
                let t = se.dist(z, b2.point).add(b2.radius);
                dplus(sd, b1, fb(z, t)).add(dplus(se, fb(z, t), b2))
            },
        ));
        optimal &= lhs == rhs;
        for z in 0..n {
            for &t in &grid {
                never_beats &=
                    dplus(sd, b1, fb(z, t)).add(dplus(se, fb(z, t), b2)) >= lhs;
            }
        }
    }
    Ok(BfuncReport {
        samples,
        optimal_middle_attains: optimal,
        grid_never_beats: never_beats,
    })
}

// ---------------------------------------------------------------------------
// DOT export
// ---------------------------------------------------------------------------

/// DOT digraph of the weak ball order over the radius grid
/// `{0, step, 2·step, ...} ∩ [0, max_radius]`, transitively reduced except
/// for mutual pairs (mirrors the specialization DOT of finite topologies).
pub fn ball_order_dot(
    s: &DistanceSpace,
    step: ExtVal,
    max_radius: ExtVal,
) -> Result<String, SpaceError> {
    let step_r = match step.finite() {
        Some(r) if r > Rat::from_integer(0) => r,
        _ => {
            return Err(SpaceError::Hypothesis(
                "the grid step must be finite and positive".into(),
            ))
        }
    };
    let max_r = max_radius.finite().ok_or_else(|| {
        SpaceError::Hypothesis("the maximum radius must be finite".into())
    })?;
    let mut balls = Vec::new();
    let mut r = Rat::from_integer(0);
    while r <= max_r {
        for x in 0..s.n() {
            balls.push(fb(x, Fin(r)));
        }
        r += step_r;
    }
    if balls.len() > 400 {
        return Err(SpaceError::Hypothesis(format!(
            "the radius grid yields {} balls; keep it at or below 400",
            balls.len()
        )));
    }
    let edge = |a: FormalBall, b: FormalBall| a != b && ball_leq(s, a, b);
    let mut out = String::from("digraph formalballs {\n  rankdir=BT;\n");
    for &b in &balls {
        let _ = writeln!(out, "  {:?};", ball_label(s, b));
    }
    for &a in &balls {
        for &b in &balls {
            if !edge(a, b) {
                continue;
            }
            let implied = !edge(b, a)
                && balls
                    .iter()
                    .any(|&c| c != a && c != b && edge(a, c) && edge(c, b) && !edge(c, a));
            if !implied {
                let _ = writeln!(out, "  {:?} -> {:?};", ball_label(s, a), ball_label(s, b));
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
