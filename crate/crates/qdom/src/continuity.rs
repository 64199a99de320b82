//! Continuity, bases, way-below distances, predomains and domains.
//!
//! The deciders here work on finite spaces, where Cauchy behaviour collapses
//! to zero-cliques (see [`DistanceSpace::zero_cliques`]): a net is Cauchy
//! exactly when its recurrent values are pairwise at distance zero, and it
//! converges to `x` exactly when every recurrent value lies in the minimal
//! open neighbourhood of `x`. This turns each net-quantified notion into a
//! finite search; the subset-quantified notions are decided by brute force
//! over bitmask subsets.

use std::collections::BTreeSet;

use crate::extval::ExtVal;
use crate::grel::GRel;
use crate::space::{
    all_subsets, members, DistanceSpace, SpaceError, Subset, SubsetRel,
};
use crate::topology::TopKind;

/// The continuity (and matching completeness) notions.
///
/// `Smyth` and `Yoneda` ask for Cauchy nets converging in the named topology;
/// `DMax` and `DSup` ask for directed subsets with a maximum or supremum. In
/// the relative forms the first distance drives the nets/directedness and the
/// second the limits/bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuityKind {
    Smyth,
    DMax,
    Yoneda,
    DSup,
}

/// The four way-below distance constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WayBelowKind {
    /// Cauchy nets converging in the Smyth topology.
    SmythTop,
    /// Cauchy nets converging in the Yoneda topology.
    YonedaTop,
    /// Directed subsets with a maximum.
    MaxRel,
    /// Directed subsets with a supremum.
    SupRel,
}

/// The basis notions matching the two primary continuity notions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Smyth,
    DMax,
}

/// The displayed interpolation inequalities, each evaluated exactly.
///
/// `Fd` is the sup-extension of `d` to finite sets (`F d x = sup_{y in F} y d x`),
/// `Phi^d` the sup of all scalings of `d` (zero where `d` is zero, infinite
/// elsewhere), `<=^d` the zero-set preorder, `dP` the inf-extension
/// (`x dP Y = inf_{y in Y} x d y`), and `~<` the uniform (zero-set) order.
/// On exact arithmetic `Phi^d` and the characteristic matrix of `<=^d`
/// coincide, so the conditions pairing them coincide as well; both spellings
/// are kept because both arise as separate displayed inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpolationCondition {
    /// `Fd ∘ Φ^d ≤ Fd`
    FdPhiBelowFd,
    /// `Fd ∘ d ~< Fd`
    FdDUniformBelowFd,
    /// `d ∘ Φ^d ≤ d`
    DPhiBelowD,
    /// `Fd ∘ ≤^d ≤ Fd`
    FdLeqBelowFd,
    /// `d ∘ ≤^d ≤ d`
    DLeqBelowD,
    /// `≤^{Fd} ⊆ Φ^{Fd} ∘ ≤^d`
    LeqFdFactors,
    /// `d ∘ ≤^d ~< d`
    DLeqUniformBelowD,
    /// `lower(d) ∘ ≤^{dP} ~< dP`
    LowerLeqPUniform,
    /// `sym(lower(d)) ∘ Φ^{lower(d)} ~< d`
    SymLowerPhiUniform,
    /// `≤^{Fd} ∘ upper(d) ≤ Fd`
    LeqFdUpperBelowFd,
}

/// Interpolation inequalities between a space and an auxiliary distance `e`
/// on the same carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuxCondition {
    /// `e ∘ Φ^{upper(d)} ~< d`
    AuxPhiUpperUniform,
    /// `e ∘ Φ^d ~< d`
    AuxPhiDUniform,
    /// `lower(d) ∨ upper(d)^op ~< e`
    AuxDominatesLowerJoinOpUpper,
}

/// `v` lies in the minimal open neighbourhood of `z` in the topology of the
/// given kind, decided by entry comparisons (no topology generation): for
/// every subbasic ball or hole containing `z`, membership of `v` reduces to
/// comparing the `v`- and `z`-entries of the defining row or column.
pub fn in_minimal_open(e: &DistanceSpace, v: usize, z: usize, top: TopKind) -> bool {
    let n = e.n();
    let ball = || (0..n).all(|c| e.dist(c, v) <= e.dist(c, z));
    let lower = || (0..n).all(|c| e.dist(c, v) >= e.dist(c, z));
    let upper = || (0..n).all(|w| e.dist(v, w) >= e.dist(z, w));
    let op_ball = || (0..n).all(|w| e.dist(v, w) <= e.dist(z, w));
    match top {
        TopKind::Ball => ball(),
        TopKind::Lower => lower(),
        TopKind::Smyth => ball() && lower(),
        TopKind::Upper => upper(),
        TopKind::Yoneda => upper() && lower(),
        TopKind::SymmetricBall => ball() && op_ball(),
    }
}

fn top_of(kind: ContinuityKind) -> Option<TopKind> {
    match kind {
        ContinuityKind::Smyth => Some(TopKind::Smyth),
        ContinuityKind::Yoneda => Some(TopKind::Yoneda),
        _ => None,
    }
}

fn rel_of(kind: ContinuityKind) -> Option<SubsetRel> {
    match kind {
        ContinuityKind::DMax => Some(SubsetRel::DMax),
        ContinuityKind::DSup => Some(SubsetRel::DSup),
        _ => None,
    }
}

/// Continuity of a space with respect to its own distance.
pub fn is_continuous(s: &DistanceSpace, kind: ContinuityKind) -> Result<bool, SpaceError> {
    is_continuous_rel(s, s, kind)
}

/// Continuity of `d` relative to `e` on the same carrier: every point must be
/// an `e`-limit of a `d`-Cauchy net (topological kinds) or an `e`-bound of a
/// `d`-directed subset (relational kinds).
///
/// Topological kinds avoid subset enumeration: a `d`-Cauchy net reduces to a
/// `d`-zero-clique, and since sub-cliques are cliques, a single self-zero
/// recurrent value in the minimal `e`-neighbourhood suffices.
pub fn is_continuous_rel(
    d: &DistanceSpace,
    e: &DistanceSpace,
    kind: ContinuityKind,
) -> Result<bool, SpaceError> {
    assert_eq!(d.n(), e.n(), "distances must share a carrier");
    let n = d.n();
    if let Some(top) = top_of(kind) {
        return Ok((0..n).all(|x| {
            (0..n).any(|z| d.dist(z, z).is_zero() && in_minimal_open(e, z, x, top))
        }));
    }
    let rel = rel_of(kind).expect("kind is topological or relational");
    d.check_size()?;
    Ok((0..n).all(|x| {
        all_subsets(n)
            .skip(1)
            .any(|y| d.is_directed(y) && e.bound_check(y, x, rel))
    }))
}

/// Every Cauchy net (zero-clique) has a limit in the given topology.
pub fn is_topologically_complete(s: &DistanceSpace, top: TopKind) -> Result<bool, SpaceError> {
    s.check_size()?;
    let n = s.n();
    Ok(s.zero_cliques().into_iter().all(|v| {
        (0..n).any(|x| members(v).all(|p| in_minimal_open(s, p, x, top)))
    }))
}

/// Every directed subset has a bound of the given kind.
pub fn is_relationally_complete(s: &DistanceSpace, rel: SubsetRel) -> Result<bool, SpaceError> {
    s.check_size()?;
    Ok(all_subsets(s.n())
        .skip(1)
        .filter(|&y| s.is_directed(y))
        .all(|y| !s.bounds_of(y, rel).is_empty()))
}

/// Completeness in the sense matching a continuity kind.
pub fn is_complete(s: &DistanceSpace, kind: ContinuityKind) -> Result<bool, SpaceError> {
    match top_of(kind) {
        Some(top) => is_topologically_complete(s, top),
        None => is_relationally_complete(s, rel_of(kind).unwrap()),
    }
}

/// `sup_{y in F} d(y, x)` for a subset mask `F` (zero when `F` is empty).
fn fd(s: &DistanceSpace, f: Subset, x: usize) -> ExtVal {
    ExtVal::sup_of(members(f).map(|y| s.dist(y, x)))
}

/// `inf_{y in Y} d(x, y)` (infinite when `Y` is empty).
fn dp(s: &DistanceSpace, x: usize, y_set: Subset) -> ExtVal {
    ExtVal::inf_of(members(y_set).map(|y| s.dist(x, y)))
}

/// Evaluates one of the displayed interpolation inequalities exactly, with
/// finite-set variables ranging over all subsets (the empty set included).
pub fn interpolation_check(s: &DistanceSpace, cond: InterpolationCondition) -> bool {
    let n = s.n();
    match cond {
        InterpolationCondition::FdPhiBelowFd | InterpolationCondition::FdLeqBelowFd => {
            all_subsets(n).all(|f| {
                (0..n).all(|x| {
                    let lhs = ExtVal::inf_of(
                        (0..n).filter(|&z| s.dist(z, x).is_zero()).map(|z| fd(s, f, z)),
                    );
                    lhs <= fd(s, f, x)
                })
            })
        }
        InterpolationCondition::FdDUniformBelowFd | InterpolationCondition::LeqFdFactors => {
            // Zero-set containment: F below x must factor exactly through an
            // interpolant z with F below z below x.
            all_subsets(n).all(|f| {
                (0..n).all(|x| {
                    !fd(s, f, x).is_zero()
                        || (0..n)
                            .any(|z| fd(s, f, z).is_zero() && s.dist(z, x).is_zero())
                })
            })
        }
        InterpolationCondition::DPhiBelowD | InterpolationCondition::DLeqBelowD => {
            s.d().phi_compose(s.d()).leq(s.d())
        }
        InterpolationCondition::DLeqUniformBelowD => (0..n).all(|x| {
            (0..n).all(|y| {
                !s.dist(x, y).is_zero()
                    || (0..n).any(|z| s.dist(x, z).is_zero() && s.dist(z, y).is_zero())
            })
        }),
        InterpolationCondition::LowerLeqPUniform => {
            let lower = s.lower_hemimetric();
            all_subsets(n).skip(1).all(|y_set| {
                (0..n).all(|x| {
                    !dp(s, x, y_set).is_zero()
                        || (0..n).any(|z| {
                            dp(s, z, y_set).is_zero() && lower.get(x, z).is_zero()
                        })
                })
            })
        }
        InterpolationCondition::SymLowerPhiUniform => {
            let lower = s.lower_hemimetric();
            let sym = lower.sym();
            (0..n).all(|x| {
                (0..n).all(|y| {
                    !s.dist(x, y).is_zero()
                        || (0..n).any(|z| {
                            lower.get(z, y).is_zero() && sym.get(x, z).is_zero()
                        })
                })
            })
        }
        InterpolationCondition::LeqFdUpperBelowFd => {
            let upper = s.upper_hemimetric();
            all_subsets(n).all(|f| {
                (0..n).all(|y| {
                    let lhs = ExtVal::inf_of(
                        (0..n)
                            .filter(|&z| fd(s, f, z).is_zero())
                            .map(|z| upper.get(z, y)),
                    );
                    lhs <= fd(s, f, y)
                })
            })
        }
    }
}

/// Evaluates an interpolation inequality involving an auxiliary distance `e`
/// on the same carrier.
pub fn interpolation_check_aux(d: &DistanceSpace, e: &DistanceSpace, cond: AuxCondition) -> bool {
    assert_eq!(d.n(), e.n(), "distances must share a carrier");
    let n = d.n();
    match cond {
        AuxCondition::AuxPhiUpperUniform => {
            let upper = d.upper_hemimetric();
            (0..n).all(|x| {
                (0..n).all(|y| {
                    !d.dist(x, y).is_zero()
                        || (0..n)
                            .any(|z| upper.get(z, y).is_zero() && e.dist(x, z).is_zero())
                })
            })
        }
        AuxCondition::AuxPhiDUniform => (0..n).all(|x| {
            (0..n).all(|y| {
                !d.dist(x, y).is_zero()
                    || (0..n).any(|z| d.dist(z, y).is_zero() && e.dist(x, z).is_zero())
            })
        }),
        AuxCondition::AuxDominatesLowerJoinOpUpper => {
            let lower = d.lower_hemimetric();
            let upper = d.upper_hemimetric();
            (0..n).all(|x| {
                (0..n).all(|y| {
                    !e.dist(x, y).is_zero()
                        || (lower.get(x, y).is_zero() && upper.get(y, x).is_zero())
                })
            })
        }
    }
}

/// Continuity with the directedness requirement taken with respect to an
/// arbitrary relation (as a characteristic or distance matrix) instead of
/// `d` itself: every point must be the `d`-max of some subset directed under
/// `directing`.
pub fn is_rel_directed_dmax_continuous(
    s: &DistanceSpace,
    directing: &GRel,
) -> Result<bool, SpaceError> {
    s.check_size()?;
    let n = s.n();
    Ok((0..n).all(|x| {
        all_subsets(n).skip(1).any(|y| {
            s.directed_witness_rel(directing, y).is_some()
                && s.bound_check(y, x, SubsetRel::DMax)
        })
    }))
}

/// The way-below distance of the given kind.
///
/// Topological kinds enumerate zero-cliques (the recurrent value sets of
/// Cauchy nets) together with their limit points in the chosen topology;
/// the net's distance column collapses to the clique minimum. Relational
/// kinds enumerate directed subsets with their bounds, reading a point's
/// distance to the subset as the inf-extension. Empty search spaces yield
/// the zero matrix, matching the empty supremum.
pub fn way_below(e: &DistanceSpace, kind: WayBelowKind) -> Result<GRel, SpaceError> {
    e.check_size()?;
    let n = e.n();
    let mut w = GRel::zero(n, n);
    let mut record = |into: &[ExtVal], z: usize| {
        for (x, &into_x) in into.iter().enumerate() {
            for y in 0..n {
                let cand = into_x.tminus(e.dist(y, z));
                if cand > w.get(x, y) {
                    w.set(x, y, cand);
                }
            }
        }
    };
    match kind {
        WayBelowKind::SmythTop | WayBelowKind::YonedaTop => {
            let top = if kind == WayBelowKind::SmythTop {
                TopKind::Smyth
            } else {
                TopKind::Yoneda
            };
            for v in e.zero_cliques() {
                let into: Vec<ExtVal> = (0..n)
                    .map(|x| ExtVal::inf_of(members(v).map(|p| e.dist(x, p))))
                    .collect();
                for z in 0..n {
                    if members(v).all(|p| in_minimal_open(e, p, z, top)) {
                        record(&into, z);
                    }
                }
            }
        }
        WayBelowKind::MaxRel | WayBelowKind::SupRel => {
            let rel = if kind == WayBelowKind::MaxRel {
                SubsetRel::DMax
            } else {
                SubsetRel::DSup
            };
            for z_set in all_subsets(n).skip(1) {
                if !e.is_directed(z_set) {
                    continue;
                }
                let into: Vec<ExtVal> = (0..n).map(|x| dp(e, x, z_set)).collect();
                for z in e.bounds_of(z_set, rel) {
                    record(&into, z);
                }
            }
        }
    }
    Ok(w)
}

/// `B` is a basis: every point is reached from Cauchy nets (Smyth kind) or
/// directed subsets (max kind) lying inside `B`.
pub fn is_basis(s: &DistanceSpace, b: Subset, kind: BasisKind) -> Result<bool, SpaceError> {
    let n = s.n();
    match kind {
        BasisKind::Smyth => Ok((0..n).all(|x| {
            members(b).any(|z| {
                z < n && s.dist(z, z).is_zero() && in_minimal_open(s, z, x, TopKind::Smyth)
            })
        })),
        BasisKind::DMax => {
            s.check_size()?;
            Ok((0..n).all(|x| {
                all_subsets(n)
                    .skip(1)
                    .filter(|y| y & !b == 0)
                    .any(|y| s.is_directed(y) && s.bound_check(y, x, SubsetRel::DMax))
            }))
        }
    }
}

/// The interpolation-through-`B` criterion `d ∘ B ∘ d ~< d`: whenever
/// `d(x, y) = 0` there is `b` in `B` with `d(x, b) = 0 = d(b, y)`. On exact
/// arithmetic this is also the criterion `d ∘ B ∘ ≤^d ~< d` for max-bases.
pub fn basis_compose_uniform(s: &DistanceSpace, b: Subset) -> bool {
    let n = s.n();
    (0..n).all(|x| {
        (0..n).all(|y| {
            !s.dist(x, y).is_zero()
                || members(b)
                    .any(|p| p < n && s.dist(x, p).is_zero() && s.dist(p, y).is_zero())
        })
    })
}

/// Density of `B` in the topology matching a basis kind: the symmetric ball
/// topology for Smyth bases, and the join of the ball topology with the
/// down-set (opposite-ball) topology of the induced preorder for max bases.
pub fn basis_dense(s: &DistanceSpace, b: Subset, kind: BasisKind) -> Result<bool, SpaceError> {
    use crate::topology::FiniteTopology;
    match kind {
        BasisKind::Smyth => {
            Ok(FiniteTopology::generate(s, TopKind::SymmetricBall)?.is_dense(b))
        }
        BasisKind::DMax => {
            let ball = FiniteTopology::generate(s, TopKind::Ball)?;
            let down_space = s.with_matrix(s.leq_rel().op())?;
            let down_sets = FiniteTopology::generate(&down_space, TopKind::Ball)?;
            Ok(ball.join(&down_sets).is_dense(b))
        }
    }
}

/// Restriction agreement: the upper and lower hemimetrics of the subspace on
/// `B` coincide with the restrictions of the ambient hemimetrics.
pub fn restriction_hemimetrics_agree(s: &DistanceSpace, b: Subset) -> bool {
    let pts: Vec<usize> = members(b).filter(|&i| i < s.n()).collect();
    let sub = s.restrict(b);
    let cut = |big: &GRel| GRel::from_fn(pts.len(), pts.len(), |i, j| big.get(pts[i], pts[j]));
    sub.upper_hemimetric() == cut(&s.upper_hemimetric())
        && sub.lower_hemimetric() == cut(&s.lower_hemimetric())
}

/// Predomain: continuous, with the upper hemimetric below the lower one.
pub fn is_predomain(s: &DistanceSpace, kind: ContinuityKind) -> Result<bool, SpaceError> {
    Ok(is_continuous(s, kind)? && s.upper_hemimetric().leq(&s.lower_hemimetric()))
}

/// Domain: a complete predomain.
pub fn is_domain(s: &DistanceSpace, kind: ContinuityKind) -> Result<bool, SpaceError> {
    Ok(is_predomain(s, kind)? && is_complete(s, kind)?)
}

/// Both sides of one way-below/hemimetric duality, each condition evaluated
/// independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualitySides {
    /// `X` is complete for the `e`-side notion.
    pub way_side_complete: bool,
    /// `X` is `d`-`e`-continuous for the `e`-side notion.
    pub way_side_continuous: bool,
    /// `d` equals the way-below distance of `e`.
    pub way_side_distance_matches: bool,
    /// `X` is complete for the `d`-side notion.
    pub hemi_side_complete: bool,
    /// `X` is `d`-continuous for the `d`-side notion.
    pub hemi_side_continuous: bool,
    /// `e` equals the lower hemimetric of `d`.
    pub hemi_side_e_is_lower: bool,
    /// The upper hemimetric of `d` is below the lower one.
    pub hemi_side_lower_dominates: bool,
}

impl DualitySides {
    pub fn way_side(&self) -> bool {
        self.way_side_complete && self.way_side_continuous && self.way_side_distance_matches
    }

    pub fn hemi_side(&self) -> bool {
        self.hemi_side_complete
            && self.hemi_side_continuous
            && self.hemi_side_e_is_lower
            && self.hemi_side_lower_dominates
    }

    pub fn agree(&self) -> bool {
        self.way_side() == self.hemi_side()
    }
}

/// The duality report for a pair of distances on a shared carrier, covering
/// the topological (Smyth/Yoneda) and relational (max/sup) equivalences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualityReport {
    pub topological: DualitySides,
    pub relational: DualitySides,
}

impl DualityReport {
    pub fn agree(&self) -> bool {
        self.topological.agree() && self.relational.agree()
    }
}

/// Evaluates both duality equivalences for `d` against `e`.
pub fn duality_report(
    d: &DistanceSpace,
    e: &DistanceSpace,
) -> Result<DualityReport, SpaceError> {
    assert_eq!(d.n(), e.n(), "distances must share a carrier");
    let lower = d.lower_hemimetric();
    let upper = d.upper_hemimetric();
    let topological = DualitySides {
        way_side_complete: is_complete(e, ContinuityKind::Yoneda)?,
        way_side_continuous: is_continuous_rel(d, e, ContinuityKind::Yoneda)?,
        way_side_distance_matches: *d.d() == way_below(e, WayBelowKind::YonedaTop)?,
        hemi_side_complete: is_complete(d, ContinuityKind::Smyth)?,
        hemi_side_continuous: is_continuous(d, ContinuityKind::Smyth)?,
        hemi_side_e_is_lower: *e.d() == lower,
        hemi_side_lower_dominates: upper.leq(&lower),
    };
    let relational = DualitySides {
        way_side_complete: is_complete(e, ContinuityKind::DSup)?,
        way_side_continuous: is_continuous_rel(d, e, ContinuityKind::DSup)?,
        way_side_distance_matches: *d.d() == way_below(e, WayBelowKind::SupRel)?,
        hemi_side_complete: is_complete(d, ContinuityKind::DMax)?,
        hemi_side_continuous: is_continuous(d, ContinuityKind::DMax)?,
        hemi_side_e_is_lower: *e.d() == lower,
        hemi_side_lower_dominates: upper.leq(&lower),
    };
    Ok(DualityReport {
        topological,
        relational,
    })
}

/// For every lower-hemimetric-directed `Y` there is a `d`-directed `Z`
/// matching it in both traces: `sup_{y in Y} lower(y, ·)` and
/// `inf_{y in Y} d(·, y)`.
pub fn lower_directed_transfer(s: &DistanceSpace) -> Result<bool, SpaceError> {
    s.check_size()?;
    let n = s.n();
    let lower_space = s.with_matrix(s.lower_hemimetric())?;
    let trace = |y_set: Subset| -> (Vec<ExtVal>, Vec<ExtVal>) {
        let sup_lower = (0..n)
            .map(|w| ExtVal::sup_of(members(y_set).map(|y| lower_space.dist(y, w))))
            .collect();
        let inf_d = (0..n).map(|u| dp(s, u, y_set)).collect();
        (sup_lower, inf_d)
    };
    let reachable: BTreeSet<(Vec<ExtVal>, Vec<ExtVal>)> = all_subsets(n)
        .skip(1)
        .filter(|&z| s.is_directed(z))
        .map(trace)
        .collect();
    Ok(all_subsets(n)
        .skip(1)
        .filter(|&y| lower_space.is_directed(y))
        .all(|y| reachable.contains(&trace(y))))
}
