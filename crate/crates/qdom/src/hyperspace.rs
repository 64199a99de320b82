//! Hausdorff distances on the powerset, union completeness, the Noetherian
//! property, ideals, and the relational completion of a max-continuous space.
//!
//! Subsets are bitmasks over the base space. The full hyperspace (both
//! Hausdorff matrices over every subset) is built eagerly and capped at
//! [`HYPERSPACE_MAX_POINTS`] base points; the relational completion only
//! materializes the directed subsets and is capped at
//! [`COMPLETION_MAX_POINTS`].

use std::collections::BTreeMap;

use crate::continuity::{is_basis, is_continuous, is_predomain, BasisKind, ContinuityKind};
use crate::extval::ExtVal;
use crate::grel::GRel;
use crate::space::{
    all_subsets, members, CauchyMode, DistanceSpace, SpaceError, Subset, SubsetRel, UPSeq,
};
use crate::topology::{FiniteTopology, TopKind};

/// Base-space cap for operations that materialize all `2^n` subsets.
pub const HYPERSPACE_MAX_POINTS: usize = 8;
/// Base-space cap for the relational completion and per-directed-set scans.
pub const COMPLETION_MAX_POINTS: usize = 10;

/// The two Hausdorff lifts of a distance to the powerset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HausdorffKind {
    /// `Y d_H Z = sup_{y in Y} inf_{z in Z} d(y, z)`.
    Classical,
    /// `Y d^H Z = inf_{z in Z} sup_{y in Y} d(y, z)`.
    Reverse,
}

/// Hausdorff distance between two subsets, evaluated over an arbitrary
/// matrix (which need not satisfy the triangle inequality). Empty subsets
/// follow `inf ∅ = ∞` and `sup ∅ = 0`.
pub fn hausdorff_of(rel: &GRel, y: Subset, z: Subset, kind: HausdorffKind) -> ExtVal {
    match kind {
        HausdorffKind::Classical => ExtVal::sup_of(
            members(y).map(|i| ExtVal::inf_of(members(z).map(|j| rel.get(i, j)))),
        ),
        HausdorffKind::Reverse => ExtVal::inf_of(
            members(z).map(|j| ExtVal::sup_of(members(y).map(|i| rel.get(i, j)))),
        ),
    }
}

/// Hausdorff distance between two subsets of a space.
pub fn hausdorff(s: &DistanceSpace, y: Subset, z: Subset, kind: HausdorffKind) -> ExtVal {
    hausdorff_of(s.d(), y, z, kind)
}

fn check_cap(n: usize, max: usize) -> Result<(), SpaceError> {
    if n > max {
        Err(SpaceError::TooLarge { n, max })
    } else {
        Ok(())
    }
}

/// One Hausdorff matrix over all `2^n` subsets, indexed by mask.
fn hyper_matrix(rel: &GRel, n: usize, kind: HausdorffKind) -> GRel {
    let m = 1usize << n;
    GRel::from_fn(m, m, |y, z| hausdorff_of(rel, y as Subset, z as Subset, kind))
}

/// Both Hausdorff lifts of a space, over every subset of the carrier.
#[derive(Debug, Clone)]
pub struct Hyperspace {
    base: DistanceSpace,
    subsets: Vec<Subset>,
    dh: GRel,
    dhrev: GRel,
}

impl Hyperspace {
    pub fn new(s: &DistanceSpace) -> Result<Hyperspace, SpaceError> {
        check_cap(s.n(), HYPERSPACE_MAX_POINTS)?;
        let n = s.n();
        let dh = hyper_matrix(s.d(), n, HausdorffKind::Classical);
        let dhrev = hyper_matrix(s.d(), n, HausdorffKind::Reverse);
        debug_assert!(dh.leq(&dhrev));
        Ok(Hyperspace {
            base: s.clone(),
            subsets: all_subsets(n).collect(),
            dh,
            dhrev,
        })
    }

    pub fn base(&self) -> &DistanceSpace {
        &self.base
    }

    /// All subsets in mask order; a mask is also its own matrix index.
    pub fn subsets(&self) -> &[Subset] {
        &self.subsets
    }

    /// The classical Hausdorff matrix `d_H`, indexed by mask.
    pub fn classical(&self) -> &GRel {
        &self.dh
    }

    /// The reverse Hausdorff matrix `d^H`, indexed by mask.
    pub fn reverse(&self) -> &GRel {
        &self.dhrev
    }
}

/// Renders a subset as `{a,b}` using the base labels.
pub fn subset_label(s: &DistanceSpace, set: Subset) -> String {
    let names: Vec<&str> = members(set).map(|i| s.label(i)).collect();
    format!("{{{}}}", names.join(","))
}

/// Outcome of the functorial-inequality checks between two distances on a
/// shared carrier, each verified exactly over all subset pairs with
/// hyperspace compositions taken min-plus over all subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HausfuncReport {
    /// `d_H ≤ d^H` for both input distances.
    pub classical_below_reverse: bool,
    /// `(d∘e)_H ≤ d_H∘e_H ≤ 2(d∘e)_H`.
    pub classical_compose: bool,
    /// `(d∘e)^H ≤ d_H∘e^H ≤ 2(d∘e)^H`.
    pub mixed_compose: bool,
    /// `d^H∘e^H = d^H∘e_H`.
    pub reverse_compose_equality: bool,
}

impl HausfuncReport {
    pub fn all_hold(&self) -> bool {
        self.classical_below_reverse
            && self.classical_compose
            && self.mixed_compose
            && self.reverse_compose_equality
    }
}

/// Verifies the four functorial (in)equalities relating the Hausdorff lifts
/// of `d`, `e`, and their min-plus composite.
pub fn hausfunc_check(
    sd: &DistanceSpace,
    se: &DistanceSpace,
) -> Result<HausfuncReport, SpaceError> {
    assert_eq!(sd.labels(), se.labels(), "distances must share a carrier");
    check_cap(sd.n(), HYPERSPACE_MAX_POINTS)?;
    let n = sd.n();
    let dh_d = hyper_matrix(sd.d(), n, HausdorffKind::Classical);
    let rev_d = hyper_matrix(sd.d(), n, HausdorffKind::Reverse);
    let dh_e = hyper_matrix(se.d(), n, HausdorffKind::Classical);
    let rev_e = hyper_matrix(se.d(), n, HausdorffKind::Reverse);
    let composite = sd.d().compose(se.d());
    let comp_h = hyper_matrix(&composite, n, HausdorffKind::Classical);
    let comp_rev = hyper_matrix(&composite, n, HausdorffKind::Reverse);

    let classical_mid = dh_d.compose(&dh_e);
    let mixed_mid = dh_d.compose(&rev_e);
    Ok(HausfuncReport {
        classical_below_reverse: dh_d.leq(&rev_d) && dh_e.leq(&rev_e),
        classical_compose: comp_h.leq(&classical_mid) && classical_mid.leq(&comp_h.scale(2)),
        mixed_compose: comp_rev.leq(&mixed_mid) && mixed_mid.leq(&comp_rev.scale(2)),
        reverse_compose_equality: rev_d.compose(&rev_e) == rev_d.compose(&dh_e),
    })
}

/// Whether the union of `family` is the expected bound: the `d^H`-max for
/// the reverse kind, the `d_H`-sup for the classical kind, with the bound
/// quantifier ranging over all subsets of the carrier.
fn union_is_bound(
    metric: &dyn Fn(Subset, Subset) -> ExtVal,
    family: &[Subset],
    n: usize,
    kind: HausdorffKind,
) -> bool {
    let union = family.iter().fold(0u32, |acc, y| acc | y);
    let below = family.iter().all(|&y| metric(y, union).is_zero());
    if !below {
        return false;
    }
    match kind {
        HausdorffKind::Reverse => all_subsets(n).all(|w| {
            let closest = ExtVal::inf_of(family.iter().map(|&y| metric(w, y)));
            closest <= metric(w, union)
        }),
        HausdorffKind::Classical => all_subsets(n).all(|w| {
            let farthest = ExtVal::sup_of(family.iter().map(|&y| metric(y, w)));
            metric(union, w) <= farthest
        }),
    }
}

fn family_directed(metric: &dyn Fn(Subset, Subset) -> ExtVal, family: &[Subset]) -> bool {
    family
        .iter()
        .any(|&w| family.iter().all(|&y| metric(y, w).is_zero()))
}

/// Directedness and union-bound status of one explicit family of subsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyUnionOutcome {
    pub directed: bool,
    /// Meaningful only when `directed`; vacuously true otherwise.
    pub union_is_bound: bool,
}

/// Checks one family of subsets against the union-completeness claim for
/// the chosen Hausdorff lift.
pub fn family_union_check(
    s: &DistanceSpace,
    family: &[Subset],
    kind: HausdorffKind,
) -> Result<FamilyUnionOutcome, SpaceError> {
    check_cap(s.n(), HYPERSPACE_MAX_POINTS)?;
    assert!(!family.is_empty(), "families of subsets must be nonempty");
    let metric = |y: Subset, z: Subset| hausdorff(s, y, z, kind);
    let directed = family_directed(&metric, family);
    let union_is_bound = !directed || union_is_bound(&metric, family, s.n(), kind);
    Ok(FamilyUnionOutcome {
        directed,
        union_is_bound,
    })
}

/// Aggregate result of [`union_completeness_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnionCompletenessReport {
    /// Families that passed at least one directedness filter.
    pub families_checked: usize,
    pub max_ok: bool,
    pub sup_ok: bool,
    /// A `d^H`-directed family whose union is not its `d^H`-max, if any.
    pub max_failure: Option<Vec<Subset>>,
    /// A `d_H`-directed family whose union is not its `d_H`-sup, if any.
    pub sup_failure: Option<Vec<Subset>>,
}

impl UnionCompletenessReport {
    pub fn all_hold(&self) -> bool {
        self.max_ok && self.sup_ok
    }
}

/// Verifies that unions of directed families of subsets are the matching
/// bounds: `∪𝒴 = d^H-max 𝒴` for `d^H`-directed `𝒴` and `∪𝒴 = d_H-sup 𝒴`
/// for `d_H`-directed `𝒴`. Enumerates every family of at most four subsets
/// plus every principal family (all subsets of one fixed set); full family
/// enumeration would be doubly exponential.
pub fn union_completeness_check(s: &DistanceSpace) -> Result<UnionCompletenessReport, SpaceError> {
    check_cap(s.n(), HYPERSPACE_MAX_POINTS)?;
    let n = s.n();
    let rev = hyper_matrix(s.d(), n, HausdorffKind::Reverse);
    let dh = hyper_matrix(s.d(), n, HausdorffKind::Classical);
    let rev_metric = |y: Subset, z: Subset| rev.get(y as usize, z as usize);
    let dh_metric = |y: Subset, z: Subset| dh.get(y as usize, z as usize);

    let mut report = UnionCompletenessReport {
        families_checked: 0,
        max_ok: true,
        sup_ok: true,
        max_failure: None,
        sup_failure: None,
    };
    let run = |family: &[Subset], report: &mut UnionCompletenessReport| {
        let mut counted = false;
        if family_directed(&rev_metric, family) {
            counted = true;
            if !union_is_bound(&rev_metric, family, n, HausdorffKind::Reverse)
                && report.max_failure.is_none()
            {
                report.max_ok = false;
                report.max_failure = Some(family.to_vec());
            }
        }
        if family_directed(&dh_metric, family) {
            counted = true;
            if !union_is_bound(&dh_metric, family, n, HausdorffKind::Classical)
                && report.sup_failure.is_none()
            {
                report.sup_ok = false;
                report.sup_failure = Some(family.to_vec());
            }
        }
        if counted {
            report.families_checked += 1;
        }
    };

    // Principal families: every subset of one fixed set.
    for top in all_subsets(n) {
        let mut family = Vec::with_capacity(1 << top.count_ones());
        let mut sub = top;
        loop {
            family.push(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & top;
        }
        run(&family, &mut report);
    }

    // All families of up to four distinct subsets.
    let m = 1u32 << n;
    let mut family = [0u32; 4];
    for a in 0..m {
        family[0] = a;
        run(&family[..1], &mut report);
        for b in (a + 1)..m {
            family[1] = b;
            run(&family[..2], &mut report);
            for c in (b + 1)..m {
                family[2] = c;
                run(&family[..3], &mut report);
                for e in (c + 1)..m {
                    family[3] = e;
                    run(&family[..4], &mut report);
                }
            }
        }
    }
    Ok(report)
}

/// Per-notion breakdown of the Noetherian property over ultimately periodic
/// sequences (every nonempty subset taken as a cycle).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoetherianReport {
    /// Every Cauchy sequence is Cauchy for the opposite distance.
    pub cauchy_implies_op_cauchy: bool,
    /// Every pre-Cauchy sequence is Cauchy for the opposite distance.
    pub pre_cauchy_implies_op_cauchy: bool,
    /// Every Cauchy sequence admits a constant subnet that is pre-Cauchy
    /// for the opposite distance.
    pub cauchy_has_op_pre_cauchy_subnet: bool,
}

impl NoetherianReport {
    pub fn all_equivalent(&self) -> bool {
        self.cauchy_implies_op_cauchy == self.pre_cauchy_implies_op_cauchy
            && self.cauchy_implies_op_cauchy == self.cauchy_has_op_pre_cauchy_subnet
    }
}

/// Evaluates the three equivalent Noetherian criteria over all cycle
/// supports. On finite spaces all three are forced true: Cauchy recurrence
/// demands a zero-clique, which is already symmetric.
pub fn noetherian_report(s: &DistanceSpace) -> NoetherianReport {
    let n = s.n();
    let mut report = NoetherianReport {
        cauchy_implies_op_cauchy: true,
        pre_cauchy_implies_op_cauchy: true,
        cauchy_has_op_pre_cauchy_subnet: true,
    };
    for cyc in all_subsets(n).skip(1) {
        let seq = UPSeq::new(vec![], members(cyc).collect());
        let op_cauchy = s.seq_cauchy(&seq, CauchyMode::OpCauchy);
        if s.seq_cauchy(&seq, CauchyMode::Cauchy) {
            report.cauchy_implies_op_cauchy &= op_cauchy;
            report.cauchy_has_op_pre_cauchy_subnet &= seq.recurrent().iter().any(|&r| {
                s.seq_cauchy(&UPSeq::constant(r), CauchyMode::OpCauchy)
            });
        }
        if s.seq_cauchy(&seq, CauchyMode::PreCauchy) {
            report.pre_cauchy_implies_op_cauchy &= op_cauchy;
        }
    }
    report
}

/// Every Cauchy sequence is Cauchy for the opposite distance. Always true
/// on finite spaces; infinite catalog spaces evaluate registered witnesses
/// instead.
pub fn is_noetherian(s: &DistanceSpace) -> bool {
    noetherian_report(s).cauchy_implies_op_cauchy
}

/// `Y d^H Y = 0` for every directed `Y` — the reverse Hausdorff distance is
/// a hemimetric on the directed subsets (a consequence of the Noetherian
/// property, unconditional on finite spaces).
pub fn dhrev_hemimetric_check(s: &DistanceSpace) -> Result<bool, SpaceError> {
    check_cap(s.n(), COMPLETION_MAX_POINTS)?;
    Ok(all_subsets(s.n())
        .skip(1)
        .filter(|&y| s.is_directed(y))
        .all(|y| hausdorff(s, y, y, HausdorffKind::Reverse).is_zero()))
}

/// The family of ideals of a space: directed subsets closed in the ball
/// topology of the upper hemimetric.
#[derive(Debug, Clone)]
pub struct IdealFamily {
    base: DistanceSpace,
    members: Vec<Subset>,
}

impl IdealFamily {
    pub fn base(&self) -> &DistanceSpace {
        &self.base
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn contains(&self, set: Subset) -> bool {
        self.members.binary_search(&set).is_ok()
    }
}

/// Enumerates the ideals of `s`.
pub fn ideal_family(s: &DistanceSpace) -> Result<IdealFamily, SpaceError> {
    check_cap(s.n(), COMPLETION_MAX_POINTS)?;
    let upper_space = s.with_matrix(s.upper_hemimetric())?;
    let upper_ball = FiniteTopology::generate(&upper_space, TopKind::Ball)?;
    let members = all_subsets(s.n())
        .skip(1)
        .filter(|&y| s.is_directed(y) && upper_ball.closure(y) == y)
        .collect();
    Ok(IdealFamily {
        base: s.clone(),
        members,
    })
}

/// The ideal completion as a space: one point per ideal, labeled by its
/// members, under the reverse Hausdorff distance. Requires a max-continuous
/// base.
pub fn ideal_completion_space(s: &DistanceSpace) -> Result<DistanceSpace, SpaceError> {
    if !is_continuous(s, ContinuityKind::DMax)? {
        return Err(SpaceError::NotContinuous);
    }
    let fam = ideal_family(s)?;
    let k = fam.members().len();
    let matrix = GRel::from_fn(k, k, |i, j| {
        hausdorff(s, fam.members()[i], fam.members()[j], HausdorffKind::Reverse)
    });
    let labels = fam.members().iter().map(|&y| subset_label(s, y)).collect();
    DistanceSpace::new(labels, matrix)
}

/// Structural facts verified while building a relational completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletionReport {
    /// The lower hemimetric of the restricted reverse Hausdorff distance
    /// equals the restricted classical Hausdorff distance.
    pub lower_matches_classical: bool,
    /// The completion is max-continuous.
    pub completion_continuous: bool,
    /// Upper below lower hemimetric on the completion.
    pub completion_predomain: bool,
    /// Unions of directed singleton and pair families stay inside the
    /// completion and are their maxima (capped completeness evidence).
    pub completion_complete: bool,
    /// The embedded down-sets form a max-basis of the completion.
    pub embedded_basis: bool,
    /// `(≤^d x) d^H (≤^d y) ≤ d(x, y)` for all points.
    pub embedding_contraction: bool,
    /// The embedding is an isometry (equality above).
    pub embedding_isometry: bool,
    /// The base space is a max-predomain.
    pub base_is_predomain: bool,
}

impl CompletionReport {
    /// The completion is a max-domain.
    pub fn is_max_domain(&self) -> bool {
        self.completion_continuous && self.completion_predomain && self.completion_complete
    }
}

/// The directed subsets of a max-continuous space under the reverse
/// Hausdorff distance, with the down-set embedding.
#[derive(Debug, Clone)]
pub struct RelationalCompletion {
    family: Vec<Subset>,
    space: DistanceSpace,
    embedding: Vec<usize>,
    report: CompletionReport,
}

impl RelationalCompletion {
    /// The directed subsets, in ascending mask order; index `i` here is
    /// point `i` of [`RelationalCompletion::space`].
    pub fn family(&self) -> &[Subset] {
        &self.family
    }

    /// The completion as a distance space (labels name the subsets).
    pub fn space(&self) -> &DistanceSpace {
        &self.space
    }

    /// For each base point `x`, the family index of its down-set `(≤^d x)`.
    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    pub fn report(&self) -> &CompletionReport {
        &self.report
    }

}

/// Builds the relational completion of a max-continuous space and verifies
/// its structural properties.
pub fn relational_completion(s: &DistanceSpace) -> Result<RelationalCompletion, SpaceError> {
    check_cap(s.n(), COMPLETION_MAX_POINTS)?;
    if !is_continuous(s, ContinuityKind::DMax)? {
        return Err(SpaceError::NotContinuous);
    }
    let n = s.n();
    let family: Vec<Subset> = all_subsets(n).skip(1).filter(|&y| s.is_directed(y)).collect();
    let count = family.len();
    let index_of = |set: Subset| family.binary_search(&set).ok();

    let matrix = GRel::from_fn(count, count, |i, j| {
        hausdorff(s, family[i], family[j], HausdorffKind::Reverse)
    });
    let classical = GRel::from_fn(count, count, |i, j| {
        hausdorff(s, family[i], family[j], HausdorffKind::Classical)
    });
    let labels = family.iter().map(|&y| subset_label(s, y)).collect();
    let space = DistanceSpace::new(labels, matrix.clone())?;

    // Down-sets are directed on a max-continuous space, so each embeds.
    let down = |x: usize| {
        crate::space::mask_of((0..n).filter(|&z| s.dist(z, x).is_zero()))
    };
    let embedding: Vec<usize> = (0..n)
        .map(|x| index_of(down(x)).expect("down-sets of a continuous space are directed"))
        .collect();

    let lower = space.lower_hemimetric();
    let lower_matches_classical = lower == classical;

    // Continuity via self-zero column representatives.
    let mut column_owners: BTreeMap<Vec<ExtVal>, bool> = BTreeMap::new();
    for j in 0..count {
        let col: Vec<ExtVal> = (0..count).map(|k| matrix.get(k, j)).collect();
        let entry = column_owners.entry(col).or_insert(false);
        *entry |= matrix.get(j, j).is_zero();
    }
    let completion_continuous = (0..count).all(|i| {
        let col: Vec<ExtVal> = (0..count).map(|k| matrix.get(k, i)).collect();
        column_owners[&col]
    });

    let completion_predomain = space.upper_hemimetric().leq(&lower);

    // Capped completeness evidence: directed singletons and pairs must have
    // their union inside the family and equal to their max.
    let mut completion_complete = true;
    'pairs: for i in 0..count {
        for j in i..count {
            let pair = [i, j];
            let witness = pair
                .iter()
                .any(|&w| pair.iter().all(|&y| matrix.get(y, w).is_zero()));
            if !witness {
                continue;
            }
            let union = family[i] | family[j];
            let Some(u) = index_of(union) else {
                completion_complete = false;
                break 'pairs;
            };
            let below = pair.iter().all(|&y| matrix.get(y, u).is_zero());
            let max = (0..count).all(|w| {
                ExtVal::inf_of(pair.iter().map(|&y| matrix.get(w, y))) <= matrix.get(w, u)
            });
            if !(below && max) {
                completion_complete = false;
                break 'pairs;
            }
        }
    }

    // Every member is the max of its embedded element down-sets.
    let embedded_basis = (0..count).all(|i| {
        let cluster: Vec<usize> = members(family[i]).map(|y| embedding[y]).collect();
        let directed = cluster
            .iter()
            .any(|&w| cluster.iter().all(|&z| matrix.get(z, w).is_zero()));
        let below = cluster.iter().all(|&z| matrix.get(z, i).is_zero());
        let max = (0..count).all(|w| {
            ExtVal::inf_of(cluster.iter().map(|&z| matrix.get(w, z))) <= matrix.get(w, i)
        });
        directed && below && max
    });

    let embedding_contraction = (0..n).all(|x| {
        (0..n).all(|y| matrix.get(embedding[x], embedding[y]) <= s.dist(x, y))
    });
    let embedding_isometry = (0..n).all(|x| {
        (0..n).all(|y| matrix.get(embedding[x], embedding[y]) == s.dist(x, y))
    });

    let report = CompletionReport {
        lower_matches_classical,
        completion_continuous,
        completion_predomain,
        completion_complete,
        embedded_basis,
        embedding_contraction,
        embedding_isometry,
        base_is_predomain: is_predomain(s, ContinuityKind::DMax)?,
    };
    Ok(RelationalCompletion {
        family,
        space,
        embedding,
        report,
    })
}

/// Outcome of checking the universal property of the ideal completion of a
/// basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniversalityReport {
    pub ideal_count: usize,
    /// Every `(≤^d x) ∩ B` is an ideal of the restricted space.
    pub images_are_ideals: bool,
    /// `((≤^d x) ∩ B) d^H ((≤^d y) ∩ B) = d(x, y)` for all points.
    pub isometry: bool,
    /// Every ideal is the image of some point.
    pub surjective: bool,
    /// Points with equal images are equivalent (equal rows and columns).
    pub injective_mod_equivalence: bool,
    /// The base space is max-complete.
    pub base_complete: bool,
}

impl UniversalityReport {
    /// Surjectivity onto the ideals must occur exactly for complete spaces.
    pub fn surjectivity_matches_completeness(&self) -> bool {
        self.surjective == self.base_complete
    }
}

/// Verifies that `x ↦ (≤^d x) ∩ B` is an isometry from a max-predomain into
/// the ideals of its max-basis `B`, surjective exactly when the space is
/// complete. Hypothesis failures are reported as errors.
pub fn universality_check(s: &DistanceSpace, b: Subset) -> Result<UniversalityReport, SpaceError> {
    if !is_basis(s, b, BasisKind::DMax)? {
        return Err(SpaceError::Hypothesis(
            "the chosen subset is not a max-basis".into(),
        ));
    }
    if !is_predomain(s, ContinuityKind::DMax)? {
        return Err(SpaceError::Hypothesis(
            "the space is not a max-predomain".into(),
        ));
    }
    let n = s.n();
    let pts: Vec<usize> = members(b).filter(|&i| i < n).collect();
    let sb = s.restrict(b);
    let ideals = ideal_family(&sb)?;

    let image = |x: usize| {
        crate::space::mask_of(
            (0..pts.len()).filter(|&i| s.dist(pts[i], x).is_zero()),
        )
    };
    let images: Vec<Subset> = (0..n).map(image).collect();
    let images_are_ideals = images.iter().all(|&m| ideals.contains(m));
    let isometry = (0..n).all(|x| {
        (0..n).all(|y| {
            hausdorff(&sb, images[x], images[y], HausdorffKind::Reverse) == s.dist(x, y)
        })
    });
    let surjective = ideals
        .members()
        .iter()
        .all(|&m| images.contains(&m));
    let injective_mod_equivalence = (0..n).all(|x| {
        (0..n).all(|y| images[x] != images[y] || s.d_equivalent(x, y))
    });
    Ok(UniversalityReport {
        ideal_count: ideals.members().len(),
        images_are_ideals,
        isometry,
        surjective,
        injective_mod_equivalence,
        base_complete: crate::continuity::is_relationally_complete(s, SubsetRel::DMax)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ev(s: &str) -> ExtVal {
        s.parse().unwrap()
    }

    fn space(rows: &[&[&str]]) -> DistanceSpace {
        DistanceSpace::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| ev(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn space_b() -> DistanceSpace {
        space(&[&["0", "1"], &["2", "0"]])
    }

    fn chain3() -> DistanceSpace {
        space(&[&["0", "0", "0"], &["inf", "0", "0"], &["inf", "inf", "0"]])
    }

    fn zero2() -> DistanceSpace {
        space(&[&["0", "0"], &["0", "0"]])
    }

    #[test]
    fn hausdorff_examples_on_space_b() {
        let b = space_b();
        assert_eq!(hausdorff(&b, 0b11, 0b01, HausdorffKind::Reverse), ev("2"));
        assert_eq!(hausdorff(&b, 0b11, 0b01, HausdorffKind::Classical), ev("2"));
        assert_eq!(hausdorff(&b, 0b01, 0b11, HausdorffKind::Classical), ev("0"));
        assert_eq!(hausdorff(&b, 0b01, 0b11, HausdorffKind::Reverse), ev("0"));
    }

    #[test]
    fn hausdorff_empty_subset_conventions() {
        let b = space_b();
        for y in [0b00u32, 0b01, 0b10, 0b11] {
            assert_eq!(hausdorff(&b, y, 0, HausdorffKind::Reverse), ExtVal::INF);
        }
        assert_eq!(hausdorff(&b, 0, 0b11, HausdorffKind::Reverse), ExtVal::ZERO);
        assert_eq!(hausdorff(&b, 0, 0, HausdorffKind::Classical), ExtVal::ZERO);
    }

    #[test]
    fn classical_self_distance_vanishes_on_final_sets() {
        for s in [space_b(), chain3(), zero2()] {
            for y in all_subsets(s.n()).skip(1) {
                if s.is_final(y) {
                    assert!(hausdorff(&s, y, y, HausdorffKind::Classical).is_zero());
                }
            }
        }
    }

    #[test]
    fn hausfunc_holds_on_space_b_and_zero() {
        let b = space_b();
        assert!(hausfunc_check(&b, &b).unwrap().all_hold());
        let z = zero2();
        assert!(hausfunc_check(&z, &z).unwrap().all_hold());
    }

    #[test]
    fn union_completeness_examples() {
        for s in [space_b(), chain3(), zero2()] {
            let report = union_completeness_check(&s).unwrap();
            assert!(report.all_hold(), "{:?}", report);
            assert!(report.families_checked > 0);
        }
        let c = chain3();
        let out =
            family_union_check(&c, &[0b001, 0b011], HausdorffKind::Reverse).unwrap();
        assert!(out.directed && out.union_is_bound);
    }

    #[test]
    fn noetherian_reports_true_on_finite_spaces() {
        for s in [space_b(), chain3(), zero2(), space(&[&["0"]])] {
            let report = noetherian_report(&s);
            assert!(report.cauchy_implies_op_cauchy);
            assert!(report.all_equivalent());
            assert!(is_noetherian(&s));
        }
    }

    #[test]
    fn reverse_hausdorff_is_hemimetric_on_directed_sets() {
        for s in [space_b(), chain3(), zero2()] {
            assert!(dhrev_hemimetric_check(&s).unwrap());
        }
    }

    #[test]
    fn completion_of_space_b() {
        let c = relational_completion(&space_b()).unwrap();
        assert_eq!(c.family(), &[0b01, 0b10]);
        assert_eq!(c.space().dist(0, 1), ev("1"));
        assert_eq!(c.space().dist(1, 0), ev("2"));
        assert_eq!(c.embedding(), &[0, 1]);
        let r = c.report();
        assert!(r.is_max_domain());
        assert!(r.lower_matches_classical && r.embedded_basis && r.embedding_isometry);
    }

    #[test]
    fn completion_of_chain_reproduces_the_order() {
        let c = relational_completion(&chain3()).unwrap();
        assert_eq!(c.family().len(), 7);
        assert_eq!(
            c.embedding()
                .iter()
                .map(|&i| c.family()[i])
                .collect::<Vec<_>>(),
            vec![0b001, 0b011, 0b111]
        );
        let s = chain3();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(
                    c.space().dist(c.embedding()[x], c.embedding()[y]),
                    s.dist(x, y)
                );
            }
        }
        assert!(c.report().is_max_domain());
        assert!(c.report().lower_matches_classical);
    }

    #[test]
    fn completion_of_one_point_zero_space() {
        let c = relational_completion(&space(&[&["0"]])).unwrap();
        assert_eq!(c.family().len(), 1);
        assert!(c.report().is_max_domain() && c.report().embedding_isometry);
    }

    #[test]
    fn completion_requires_continuity() {
        let strict2 = space(&[&["inf", "0"], &["inf", "inf"]]);
        assert!(matches!(
            relational_completion(&strict2),
            Err(SpaceError::NotContinuous)
        ));
    }

    #[test]
    fn completion_of_non_predomain_is_contraction_not_isometry() {
        let flat_sharp = space(&[&["0", "0"], &["inf", "inf"]]);
        let c = relational_completion(&flat_sharp).unwrap();
        assert_eq!(c.family(), &[0b01]);
        let r = c.report();
        assert!(r.embedding_contraction && !r.embedding_isometry);
        assert!(!r.base_is_predomain);
    }

    #[test]
    fn universality_on_full_bases() {
        for s in [chain3(), space_b()] {
            let full = (1u32 << s.n()) - 1;
            let r = universality_check(&s, full).unwrap();
            assert!(r.images_are_ideals && r.isometry);
            assert!(r.surjective && r.injective_mod_equivalence);
            assert!(r.base_complete && r.surjectivity_matches_completeness());
        }
    }

    #[test]
    fn universality_with_a_proper_basis() {
        // x2 duplicates x0, so {x0, x1} is a proper max-basis.
        let s = space(&[
            &["0", "1", "0"],
            &["2", "0", "2"],
            &["0", "1", "0"],
        ]);
        assert!(is_basis(&s, 0b011, BasisKind::DMax).unwrap());
        let r = universality_check(&s, 0b011).unwrap();
        assert!(r.images_are_ideals && r.isometry && r.surjective);
        assert!(r.injective_mod_equivalence);
        assert!(r.surjectivity_matches_completeness());
    }

    #[test]
    fn universality_rejects_bad_hypotheses() {
        assert!(matches!(
            universality_check(&space_b(), 0b01),
            Err(SpaceError::Hypothesis(_))
        ));
        let flat_sharp = space(&[&["0", "0"], &["inf", "inf"]]);
        assert!(matches!(
            universality_check(&flat_sharp, 0b11),
            Err(SpaceError::Hypothesis(_))
        ));
    }

    #[test]
    fn ideal_family_members_are_directed_and_closed() {
        let s = chain3();
        let ideals = ideal_family(&s).unwrap();
        let upper_ball = FiniteTopology::generate(
            &s.with_matrix(s.upper_hemimetric()).unwrap(),
            TopKind::Ball,
        )
        .unwrap();
        for &m in ideals.members() {
            assert!(s.is_directed(m));
            assert_eq!(upper_ball.closure(m), m);
        }
    }

    fn arb_entry() -> impl Strategy<Value = ExtVal> {
        prop_oneof![
            4 => (0i64..=4, 1i64..=2).prop_map(|(n, d)| ExtVal::rat(n, d)),
            2 => Just(ExtVal::ZERO),
            1 => Just(ExtVal::INF),
        ]
    }

    fn arb_space(n: usize) -> impl Strategy<Value = DistanceSpace> {
        proptest::collection::vec(arb_entry(), n * n).prop_map(move |vs| {
            let raw = GRel::from_fn(n, n, |x, y| vs[x * n + y]).transitive_closure();
            DistanceSpace::from_rows(
                (0..n)
                    .map(|x| (0..n).map(|y| raw.get(x, y)).collect())
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        /// The classical lift never exceeds the reverse lift.
        #[test]
        fn classical_below_reverse(s in arb_space(4)) {
            let h = Hyperspace::new(&s).unwrap();
            prop_assert!(h.classical().leq(h.reverse()));
        }

        /// Both lifts of a distance satisfy the triangle inequality.
        #[test]
        fn lifts_are_distances(s in arb_space(3)) {
            let h = Hyperspace::new(&s).unwrap();
            prop_assert!(h.classical().is_distance());
            prop_assert!(h.reverse().is_distance());
        }

        /// The functorial inequalities hold for random pairs of distances
        /// on a shared carrier.
        #[test]
        fn hausfunc_holds(d in arb_space(3), e in arb_space(3)) {
            prop_assert!(hausfunc_check(&d, &e).unwrap().all_hold());
        }

        /// Directed unions are the matching bounds on random spaces.
        #[test]
        fn union_completeness_holds(s in arb_space(3)) {
            prop_assert!(union_completeness_check(&s).unwrap().all_hold());
        }

        /// Finite spaces are Noetherian with all three criteria agreeing,
        /// sampled over arbitrary ultimately periodic sequences.
        #[test]
        fn noetherian_on_random_sequences(
            s in arb_space(4),
            prefix in proptest::collection::vec(0usize..4, 0..4),
            cycle in proptest::collection::vec(0usize..4, 1..5),
        ) {
            let report = noetherian_report(&s);
            prop_assert!(report.cauchy_implies_op_cauchy && report.all_equivalent());
            let seq = UPSeq::new(prefix, cycle);
            if s.seq_cauchy(&seq, CauchyMode::Cauchy) {
                prop_assert!(s.seq_cauchy(&seq, CauchyMode::OpCauchy));
            }
        }

        /// The reverse lift has zero self-distance on directed subsets.
        #[test]
        fn dhrev_hemimetric_on_random_spaces(s in arb_space(4)) {
            prop_assert!(dhrev_hemimetric_check(&s).unwrap());
        }

        /// The completion of any continuous space verifies its full report,
        /// with the embedding isometric exactly on predomains.
        #[test]
        fn completion_report_on_continuous_spaces(s in arb_space(4)) {
            let Ok(c) = relational_completion(&s) else { return Ok(()); };
            let r = c.report();
            prop_assert!(r.lower_matches_classical);
            prop_assert!(r.is_max_domain());
            prop_assert!(r.embedded_basis);
            prop_assert!(r.embedding_contraction);
            prop_assert_eq!(r.embedding_isometry, r.base_is_predomain);
        }

        /// Universality on predomains with the full basis: isometric, and
        /// surjective exactly when complete.
        #[test]
        fn universality_on_random_predomains(s in arb_space(4)) {
            if !is_predomain(&s, ContinuityKind::DMax).unwrap() {
                return Ok(());
            }
            let full = (1u32 << s.n()) - 1;
            let r = universality_check(&s, full).unwrap();
            prop_assert!(r.images_are_ideals && r.isometry);
            prop_assert!(r.injective_mod_equivalence);
            prop_assert!(r.surjectivity_matches_completeness());
        }
    }
}
