//! Theorem-suite runner: every implemented law maps to a named check, the
//! checks run over the named catalog or seeded random corpora (in parallel,
//! merged deterministically), failing instances shrink to locally minimal
//! witnesses, and every emitted result replays to the same verdict from its
//! fingerprint alone.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{self, CatalogKind, Profile};
use crate::continuity;
use crate::extval::ExtVal;
use crate::formalballs;
use crate::hyperspace;
use crate::space::{mask_of, DistanceSpace, SpaceError};

/// Outcome of one check on one space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// Exhaustively verified.
    Pass,
    Fail,
    /// The check's hypothesis does not apply to this space.
    Skipped(String),
    /// Verified on sampled instances only.
    SampledPass,
}

impl Verdict {
    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail)
    }
}

/// Identifies the space a check ran on, with enough data to rebuild it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fingerprint {
    /// A catalog entry (formula entries mean their default finite slice).
    Named { name: String },
    /// A generated space: `catalog::random_space(points, seed, profile)`.
    Random {
        points: usize,
        seed: u64,
        profile: String,
    },
    /// A space given by its matrix rows (shrunk witnesses).
    Explicit { rows: Vec<Vec<String>> },
}

impl std::fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fingerprint::Named { name } => write!(f, "named:{name}"),
            Fingerprint::Random {
                points,
                seed,
                profile,
            } => write!(f, "random:n={points},seed={seed},profile={profile}"),
            Fingerprint::Explicit { rows } => {
                let body: Vec<String> = rows.iter().map(|r| r.join(",")).collect();
                write!(f, "explicit:[{}]", body.join(";"))
            }
        }
    }
}

/// Rebuilds the space a fingerprint denotes.
pub fn materialize(fp: &Fingerprint) -> Result<DistanceSpace, SpaceError> {
    match fp {
        Fingerprint::Named { name } => {
            let entry = catalog::get(name)?;
            match entry.kind() {
                CatalogKind::Finite(s) => Ok(s.clone()),
                CatalogKind::Formula(f) => f.default_slice(),
            }
        }
        Fingerprint::Random {
            points,
            seed,
            profile,
        } => {
            let profile: Profile = profile
                .parse()
                .map_err(SpaceError::Hypothesis)?;
            catalog::random_space(*points, *seed, profile)
        }
        Fingerprint::Explicit { rows } => {
            let mut parsed = Vec::with_capacity(rows.len());
            for row in rows {
                let mut out = Vec::with_capacity(row.len());
                for cell in row {
                    out.push(cell.parse::<ExtVal>().map_err(|e| {
                        SpaceError::Hypothesis(format!("bad entry {cell:?}: {e}"))
                    })?);
                }
                parsed.push(out);
            }
            DistanceSpace::from_rows(parsed)
        }
    }
}

/// One check on one space: the JSON report row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub fingerprint: Fingerprint,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    pub millis: u64,
}

struct Outcome {
    verdict: Verdict,
    witness: Option<String>,
}

fn pass() -> Outcome {
    Outcome {
        verdict: Verdict::Pass,
        witness: None,
    }
}

fn sampled() -> Outcome {
    Outcome {
        verdict: Verdict::SampledPass,
        witness: None,
    }
}

fn skipped(reason: impl Into<String>) -> Outcome {
    Outcome {
        verdict: Verdict::Skipped(reason.into()),
        witness: None,
    }
}

fn fail(s: &DistanceSpace, detail: impl std::fmt::Display) -> Outcome {
    Outcome {
        verdict: Verdict::Fail,
        witness: Some(format!("matrix {:?}: {detail}", matrix_rows(s))),
    }
}

/// The space's matrix as entry strings, row by row.
pub fn matrix_rows(s: &DistanceSpace) -> Vec<Vec<String>> {
    (0..s.n())
        .map(|x| (0..s.n()).map(|y| s.dist(x, y).to_string()).collect())
        .collect()
}

/// Verdict/witness for a report whose sides were computed independently:
/// exhaustive checks pass, sampled ones sampled-pass.
fn graded(s: &DistanceSpace, ok: bool, samples_only: bool, detail: impl std::fmt::Display) -> Outcome {
    if !ok {
        fail(s, detail)
    } else if samples_only {
        sampled()
    } else {
        pass()
    }
}

type Runner = fn(&DistanceSpace) -> Result<Outcome, SpaceError>;

/// A named check.
pub struct Check {
    id: &'static str,
    run: Runner,
}

impl Check {
    pub fn id(&self) -> &'static str {
        self.id
    }
}

/// Fixed sampling seed: checks must be pure functions of the space so that
/// replaying a fingerprint reproduces the verdict.
const SAMPLE_SEED: u64 = 7;

fn check_triangle(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    for x in 0..s.n() {
        for z in 0..s.n() {
            for y in 0..s.n() {
                let direct = s.dist(x, y);
                let via = s.dist(x, z).add(s.dist(z, y));
                if direct > via {
                    return Ok(fail(
                        s,
                        format!(
                            "d({x},{y}) = {direct} exceeds d({x},{z}) + d({z},{y}) = {via}"
                        ),
                    ));
                }
            }
        }
    }
    Ok(pass())
}

/// The deliberately wrong predicate used by [`self_test`]: the triangle
/// inequality with its sign flipped. Almost every space refutes it.
fn check_corrupted_triangle(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    for x in 0..s.n() {
        for z in 0..s.n() {
            for y in 0..s.n() {
                let direct = s.dist(x, y);
                let via = s.dist(x, z).add(s.dist(z, y));
                if direct < via {
                    return Ok(fail(
                        s,
                        format!(
                            "d({x},{y}) = {direct} is under d({x},{z}) + d({z},{y}) = {via}"
                        ),
                    ));
                }
            }
        }
    }
    Ok(pass())
}

fn check_hemimetric_collapse(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    if !s.is_hemimetric() {
        return Ok(skipped("the space is not a hemimetric"));
    }
    let upper = s.upper_hemimetric();
    let lower = s.lower_hemimetric();
    Ok(graded(
        s,
        upper == *s.d() && lower == *s.d(),
        false,
        "a derived hemimetric differs from the hemimetric itself",
    ))
}

fn check_duality(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let lower = s.with_matrix(s.lower_hemimetric())?;
    let report = continuity::duality_report(s, &lower)?;
    Ok(graded(s, report.agree(), false, format!("{report:?}")))
}

fn check_hausdorff_functor(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let report = hyperspace::hausfunc_check(s, s)?;
    Ok(graded(s, report.all_hold(), false, format!("{report:?}")))
}

fn check_union_completeness(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let report = hyperspace::union_completeness_check(s)?;
    Ok(graded(s, report.all_hold(), false, format!("{report:?}")))
}

fn check_noetherian_finite(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let report = hyperspace::noetherian_report(s);
    let ok = report.cauchy_implies_op_cauchy
        && report.pre_cauchy_implies_op_cauchy
        && report.cauchy_has_op_pre_cauchy_subnet;
    Ok(graded(s, ok, false, format!("{report:?}")))
}

fn check_reverse_hausdorff_hemimetric(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let ok = hyperspace::dhrev_hemimetric_check(s)?;
    Ok(graded(
        s,
        ok,
        false,
        "a directed subset has nonzero reverse self-distance",
    ))
}

fn check_relational_completion(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let completion = match hyperspace::relational_completion(s) {
        Ok(c) => c,
        Err(SpaceError::NotContinuous) => {
            return Ok(skipped("the space is not max-continuous"))
        }
        Err(e) => return Err(e),
    };
    let r = completion.report();
    let ok = r.lower_matches_classical
        && r.is_max_domain()
        && r.embedded_basis
        && r.embedding_contraction
        && r.embedding_isometry == r.base_is_predomain;
    Ok(graded(s, ok, false, format!("{r:?}")))
}

fn check_universality(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let full = mask_of(0..s.n());
    let report = match hyperspace::universality_check(s, full) {
        Ok(r) => r,
        Err(SpaceError::Hypothesis(reason)) => return Ok(skipped(reason)),
        Err(e) => return Err(e),
    };
    let ok = report.images_are_ideals
        && report.isometry
        && report.injective_mod_equivalence
        && report.surjectivity_matches_completeness();
    Ok(graded(s, ok, false, format!("{report:?}")))
}

fn check_smyth_completion(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let completion = match formalballs::smyth_completion(s) {
        Ok(c) => c,
        Err(SpaceError::NotContinuous) => {
            return Ok(skipped("the space is not Smyth-continuous"))
        }
        Err(e) => return Err(e),
    };
    let r = completion.report();
    Ok(graded(s, r.all_hold(), false, format!("{r:?}")))
}

fn check_order_transfer(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let r = formalballs::order_transfer_check(s, SAMPLE_SEED, 60);
    Ok(graded(s, r.all_hold(), true, format!("{r:?}")))
}

fn check_ball_interpolation(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let r = formalballs::interpolation_laws(s, SAMPLE_SEED, 60);
    Ok(graded(s, r.all_hold(), true, format!("{r:?}")))
}

fn check_ball_maxima(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let r = formalballs::ball_maxima_check(s, SAMPLE_SEED, 40);
    Ok(graded(s, r.all_hold(), true, format!("{r:?}")))
}

fn check_ball_domain_transfer(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let r = formalballs::ball_domain_transfer(s)?;
    Ok(graded(s, r.all_hold(), false, format!("{r:?}")))
}

fn check_kw(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let lower = s.with_matrix(s.lower_hemimetric())?;
    let r = formalballs::kw_check(s, &lower, SAMPLE_SEED, 30)?;
    Ok(graded(s, r.holds(), true, format!("{r:?}")))
}

fn check_ball_composition(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    let r = formalballs::bfunc_check(s, s, SAMPLE_SEED, 40)?;
    Ok(graded(s, r.all_hold(), true, format!("{r:?}")))
}

fn check_distance_recovery(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    for x in 0..s.n() {
        for y in 0..s.n() {
            let r = formalballs::recovered_distance(s, x, y);
            if r.weak != s.dist(x, y) || r.strict != s.dist(x, y) {
                return Ok(fail(
                    s,
                    format!("recovery at ({x},{y}): {r:?} vs d = {}", s.dist(x, y)),
                ));
            }
        }
    }
    Ok(pass())
}

fn check_romaguera_valero(s: &DistanceSpace) -> Result<Outcome, SpaceError> {
    match formalballs::romaguera_valero_check(s) {
        Ok(ok) => Ok(graded(s, ok, false, "the completeness reduction sides differ")),
        Err(SpaceError::Hypothesis(reason)) => Ok(skipped(reason)),
        Err(e) => Err(e),
    }
}

/// The registered battery, in report order.
pub fn checks() -> &'static [Check] {
    &[
        Check {
            id: "triangle",
            run: check_triangle,
        },
        Check {
            id: "hemimetric-collapse",
            run: check_hemimetric_collapse,
        },
        Check {
            id: "duality",
            run: check_duality,
        },
        Check {
            id: "hausdorff-functor",
            run: check_hausdorff_functor,
        },
        Check {
            id: "union-completeness",
            run: check_union_completeness,
        },
        Check {
            id: "noetherian-finite",
            run: check_noetherian_finite,
        },
        Check {
            id: "reverse-hausdorff-hemimetric",
            run: check_reverse_hausdorff_hemimetric,
        },
        Check {
            id: "relational-completion",
            run: check_relational_completion,
        },
        Check {
            id: "universality",
            run: check_universality,
        },
        Check {
            id: "smyth-completion",
            run: check_smyth_completion,
        },
        Check {
            id: "order-transfer",
            run: check_order_transfer,
        },
        Check {
            id: "ball-interpolation",
            run: check_ball_interpolation,
        },
        Check {
            id: "ball-maxima",
            run: check_ball_maxima,
        },
        Check {
            id: "ball-domain-transfer",
            run: check_ball_domain_transfer,
        },
        Check {
            id: "kw-biconditional",
            run: check_kw,
        },
        Check {
            id: "ball-composition",
            run: check_ball_composition,
        },
        Check {
            id: "distance-recovery",
            run: check_distance_recovery,
        },
        Check {
            id: "romaguera-valero",
            run: check_romaguera_valero,
        },
    ]
}

const CORRUPTED: Check = Check {
    id: "corrupted-triangle",
    run: check_corrupted_triangle,
};

fn check_by_id(id: &str) -> Option<&'static Check> {
    if id == CORRUPTED.id {
        return Some(&CORRUPTED);
    }
    checks().iter().find(|c| c.id == id)
}

/// Runs one check on one space, timing it; runner errors (size caps and the
/// like) become skips, since failures are reserved for refuted laws.
fn run_one(check: &Check, s: &DistanceSpace, fingerprint: Fingerprint) -> CheckResult {
    let start = Instant::now();
    let outcome = match (check.run)(s) {
        Ok(o) => o,
        Err(e) => skipped(e.to_string()),
    };
    CheckResult {
        check_id: check.id.to_string(),
        fingerprint,
        verdict: outcome.verdict,
        witness: outcome.witness,
        millis: start.elapsed().as_millis() as u64,
    }
}

fn run_witness(space: &catalog::CatalogSpace, claim: &str) -> CheckResult {
    let start = Instant::now();
    let w = space
        .witnesses()
        .iter()
        .find(|w| w.claim() == claim)
        .expect("witness claims come from the space itself");
    let (verdict, witness) = if w.verify(space) {
        // Witness verifications sample finitely many instances of claims
        // about infinite spaces.
        (Verdict::SampledPass, None)
    } else {
        (Verdict::Fail, Some(w.witness().to_string()))
    };
    CheckResult {
        check_id: format!("witness-{claim}"),
        fingerprint: Fingerprint::Named {
            name: space.name().to_string(),
        },
        verdict,
        witness,
        millis: start.elapsed().as_millis() as u64,
    }
}

/// What to run the suite on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    /// The full named catalog (formula entries run on their default slices,
    /// plus their registered witnesses).
    Named,
    /// Seeded random spaces cycling through the sizes and profiles.
    Random {
        n_spaces: usize,
        sizes: (usize, usize),
        profiles: Vec<Profile>,
        seed: u64,
    },
}

enum WorkItem {
    Space {
        fingerprint: Fingerprint,
        space: DistanceSpace,
        check: &'static Check,
    },
    Witness { name: String, claim: String },
}

/// Runs every registered check over the scope's spaces. Independent
/// (check, space) pairs run in parallel; results are merged by
/// (check_id, fingerprint), so the report order is deterministic.
pub fn run_suite(scope: &Scope) -> Result<Vec<CheckResult>, SpaceError> {
    let mut items: Vec<WorkItem> = Vec::new();
    match scope {
        Scope::Named => {
            for name in catalog::names() {
                let entry = catalog::get(name)?;
                let fingerprint = Fingerprint::Named {
                    name: name.to_string(),
                };
                let space = match entry.kind() {
                    CatalogKind::Finite(s) => s.clone(),
                    CatalogKind::Formula(f) => f.default_slice()?,
                };
                for check in checks() {
                    items.push(WorkItem::Space {
                        fingerprint: fingerprint.clone(),
                        space: space.clone(),
                        check,
                    });
                }
                for w in entry.witnesses() {
                    items.push(WorkItem::Witness {
                        name: name.to_string(),
                        claim: w.claim().to_string(),
                    });
                }
            }
        }
        Scope::Random {
            n_spaces,
            sizes,
            profiles,
            seed,
        } => {
            let (lo, hi) = *sizes;
            if lo == 0 || hi < lo {
                return Err(SpaceError::Hypothesis(
                    "size range must be nonempty and positive".into(),
                ));
            }
            if profiles.is_empty() {
                return Err(SpaceError::Hypothesis(
                    "at least one profile is required".into(),
                ));
            }
            let span = hi - lo + 1;
            for i in 0..*n_spaces {
                let points = lo + i % span;
                let profile = profiles[(i / span) % profiles.len()];
                let space_seed = seed.wrapping_add(i as u64);
                let space = catalog::random_space(points, space_seed, profile)?;
                let fingerprint = Fingerprint::Random {
                    points,
                    seed: space_seed,
                    profile: profile.name().to_string(),
                };
                for check in checks() {
                    items.push(WorkItem::Space {
                        fingerprint: fingerprint.clone(),
                        space: space.clone(),
                        check,
                    });
                }
            }
        }
    }
    let mut results: Vec<CheckResult> = items
        .par_iter()
        .map(|item| match item {
            WorkItem::Space {
                fingerprint,
                space,
                check,
            } => run_one(check, space, fingerprint.clone()),
            WorkItem::Witness { name, claim } => {
                let entry = catalog::get(name).expect("scope names come from the catalog");
                run_witness(&entry, claim)
            }
        })
        .collect();
    results.sort_by(|a, b| {
        (&a.check_id, &a.fingerprint).cmp(&(&b.check_id, &b.fingerprint))
    });
    Ok(results)
}

/// Runs the full battery on one explicit space, in battery order.
pub fn run_space(s: &DistanceSpace) -> Vec<CheckResult> {
    let fingerprint = Fingerprint::Explicit {
        rows: matrix_rows(s),
    };
    checks()
        .iter()
        .map(|check| run_one(check, s, fingerprint.clone()))
        .collect()
}

/// True when any result refutes its law.
pub fn has_failures(results: &[CheckResult]) -> bool {
    results.iter().any(|r| r.verdict.is_fail())
}

/// The JSON report.
pub fn to_json(results: &[CheckResult]) -> String {
    serde_json::to_string_pretty(results).expect("check results serialize")
}

/// Re-runs a result's check against the space its fingerprint denotes.
pub fn replay(result: &CheckResult) -> Result<Verdict, SpaceError> {
    if let Some(claim) = result.check_id.strip_prefix("witness-") {
        let Fingerprint::Named { name } = &result.fingerprint else {
            return Err(SpaceError::Hypothesis(
                "witness checks replay from catalog names".into(),
            ));
        };
        let entry = catalog::get(name)?;
        return Ok(run_witness(&entry, claim).verdict);
    }
    let check = check_by_id(&result.check_id).ok_or_else(|| {
        SpaceError::Hypothesis(format!("unknown check {:?}", result.check_id))
    })?;
    let space = materialize(&result.fingerprint)?;
    Ok(run_one(check, &space, result.fingerprint.clone()).verdict)
}

/// Greedily minimizes a failing result's space: drop points, push entries
/// to infinity, and simplify rationals (toward zero, then toward integers)
/// while the check keeps failing and the matrix stays a distance. Returns
/// the shrunk space as an explicit-fingerprint failure.
pub fn shrink(result: &CheckResult) -> Result<CheckResult, SpaceError> {
    if !result.verdict.is_fail() {
        return Err(SpaceError::Hypothesis(
            "nothing to shrink: the result did not fail".into(),
        ));
    }
    let check = check_by_id(&result.check_id).ok_or_else(|| {
        SpaceError::Hypothesis(format!("unknown check {:?}", result.check_id))
    })?;
    let still_fails = |s: &DistanceSpace| -> bool {
        matches!((check.run)(s), Ok(o) if o.verdict.is_fail())
    };
    let mut space = materialize(&result.fingerprint)?;
    if !still_fails(&space) {
        return Err(SpaceError::Hypothesis(
            "the fingerprint no longer reproduces the failure".into(),
        ));
    }
    loop {
        let mut improved = false;
        // Drop points.
        while space.n() > 1 {
            let n = space.n();
            let Some(drop) = (0..n).find(|&x| {
                let candidate = space.restrict(mask_of((0..n).filter(|&i| i != x)));
                still_fails(&candidate)
            }) else {
                break;
            };
            space = space.restrict(mask_of((0..space.n()).filter(|&i| i != drop)));
            improved = true;
        }
        // Raise entries toward infinity, then simplify what stays finite.
        let mut replacements: Vec<ExtVal> = vec![ExtVal::INF];
        for x in 0..space.n() {
            for y in 0..space.n() {
                let Some(r) = space.dist(x, y).finite() else {
                    continue;
                };
                replacements.clear();
                replacements.push(ExtVal::INF);
                if !space.dist(x, y).is_zero() {
                    replacements.push(ExtVal::ZERO);
                }
                if !r.is_integer() {
                    replacements.push(ExtVal::Fin(r.trunc()));
                }
                for candidate_entry in &replacements {
                    if *candidate_entry == space.dist(x, y) {
                        continue;
                    }
                    let mut d = space.d().clone();
                    d.set(x, y, *candidate_entry);
                    let Ok(candidate) = space.with_matrix(d) else {
                        continue;
                    };
                    if still_fails(&candidate) {
                        space = candidate;
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    let start = Instant::now();
    let outcome = match (check.run)(&space) {
        Ok(o) => o,
        Err(e) => skipped(e.to_string()),
    };
    Ok(CheckResult {
        check_id: result.check_id.clone(),
        fingerprint: Fingerprint::Explicit {
            rows: matrix_rows(&space),
        },
        verdict: outcome.verdict,
        witness: outcome.witness,
        millis: start.elapsed().as_millis() as u64,
    })
}

/// Runs the deliberately corrupted triangle check over random spaces until
/// it fails (it should almost immediately), then shrinks the failure.
/// Returns the shrunk failing result, or `None` if 100 spaces somehow
/// satisfy the corrupted predicate.
pub fn self_test(seed: u64) -> Option<CheckResult> {
    for i in 0..100u64 {
        let points = 2 + (i as usize) % 4;
        let Ok(space) = catalog::random_space(points, seed.wrapping_add(i), Profile::Generic)
        else {
            continue;
        };
        let fingerprint = Fingerprint::Random {
            points,
            seed: seed.wrapping_add(i),
            profile: Profile::Generic.name().to_string(),
        };
        let result = run_one(&CORRUPTED, &space, fingerprint);
        if result.verdict.is_fail() {
            return Some(shrink(&result).expect("failing results shrink"));
        }
    }
    None
}
