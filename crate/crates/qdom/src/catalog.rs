//! Named example spaces — small finite distance spaces plus formula-defined
//! infinite ones with closed-form evaluators and registered witnesses — and
//! seeded random generators of triangle-closed spaces in several profiles.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extval::{ExtVal, Fin, Inf, Rat};
use crate::grel::GRel;
use crate::space::{DistanceSpace, SpaceError, MAX_POINTS};

/// A catalog entry: a finite space, or a formula space over a countable
/// carrier, together with the witnesses registered for its claims.
#[derive(Debug, Clone)]
pub struct CatalogSpace {
    name: &'static str,
    kind: CatalogKind,
    witnesses: Vec<RegisteredWitness>,
}

/// The two kinds of catalog entries.
#[derive(Debug, Clone)]
pub enum CatalogKind {
    Finite(DistanceSpace),
    Formula(FormulaSpace),
}

impl CatalogSpace {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn kind(&self) -> &CatalogKind {
        &self.kind
    }

    pub fn finite(&self) -> Option<&DistanceSpace> {
        match &self.kind {
            CatalogKind::Finite(s) => Some(s),
            CatalogKind::Formula(_) => None,
        }
    }

    pub fn formula(&self) -> Option<&FormulaSpace> {
        match &self.kind {
            CatalogKind::Formula(f) => Some(f),
            CatalogKind::Finite(_) => None,
        }
    }

    pub fn witnesses(&self) -> &[RegisteredWitness] {
        &self.witnesses
    }
}

/// An infinite space given by a closed-form distance over a countable
/// carrier of nonnegative rationals, with a seeded point sampler and a
/// stable default slice for finite snapshots.
#[derive(Debug, Clone)]
pub struct FormulaSpace {
    carrier: &'static str,
    dist: fn(Rat, Rat) -> ExtVal,
    sample: fn(&mut ChaCha8Rng) -> Rat,
    default_points: &'static [(i64, i64)],
}

impl FormulaSpace {
    /// Human-readable description of the carrier.
    pub fn carrier(&self) -> &'static str {
        self.carrier
    }

    /// The closed-form distance.
    pub fn dist(&self, x: Rat, y: Rat) -> ExtVal {
        (self.dist)(x, y)
    }

    /// Draws a carrier point.
    pub fn sample_point(&self, rng: &mut ChaCha8Rng) -> Rat {
        (self.sample)(rng)
    }

    /// The stable carrier points used for default finite snapshots.
    pub fn default_points(&self) -> Vec<Rat> {
        self.default_points
            .iter()
            .map(|&(n, d)| Rat::new(n, d))
            .collect()
    }

    /// Exact triangle check on sampled triples.
    pub fn triangle_sampled(&self, seed: u64, samples: usize) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).all(|_| {
            let x = self.sample_point(&mut rng);
            let z = self.sample_point(&mut rng);
            let y = self.sample_point(&mut rng);
            self.dist(x, y) <= self.dist(x, z).add(self.dist(z, y))
        })
    }

    /// Materializes the restriction to finitely many carrier points,
    /// labelled by their values.
    pub fn finite_slice(&self, points: &[Rat]) -> Result<DistanceSpace, SpaceError> {
        let labels: Vec<String> = points.iter().map(|p| Fin(*p).to_string()).collect();
        let d = GRel::from_fn(points.len(), points.len(), |x, y| {
            self.dist(points[x], points[y])
        });
        DistanceSpace::new(labels, d)
    }

    /// The default finite snapshot.
    pub fn default_slice(&self) -> Result<DistanceSpace, SpaceError> {
        self.finite_slice(&self.default_points())
    }
}

/// A claim about a catalog space together with the data witnessing it and
/// a verifier that re-checks the witness against the space.
#[derive(Debug, Clone)]
pub struct RegisteredWitness {
    claim: &'static str,
    witness: &'static str,
    verify: fn(&CatalogSpace) -> bool,
}

impl RegisteredWitness {
    pub fn claim(&self) -> &'static str {
        self.claim
    }

    pub fn witness(&self) -> &'static str {
        self.witness
    }

    pub fn verify(&self, space: &CatalogSpace) -> bool {
        (self.verify)(space)
    }
}

/// The registered catalog names, in listing order.
pub fn names() -> &'static [&'static str] {
    &[
        "space-b",
        "3-chain",
        "strict-2-chain",
        "non-predomain",
        "zero",
        "right-projection",
        "n-chain",
    ]
}

fn finite_entry(
    name: &'static str,
    labels: &[&str],
    rows: &[&[&str]],
) -> CatalogSpace {
    let n = labels.len();
    let d = GRel::from_fn(n, n, |x, y| {
        rows[x][y].parse().expect("catalog entries are well-formed")
    });
    let space = DistanceSpace::new(labels.iter().map(|l| l.to_string()).collect(), d)
        .expect("catalog spaces satisfy the triangle inequality");
    CatalogSpace {
        name,
        kind: CatalogKind::Finite(space),
        witnesses: Vec::new(),
    }
}

fn right_projection_dist(_x: Rat, y: Rat) -> ExtVal {
    Fin(y)
}

fn sample_nonneg_rat(rng: &mut ChaCha8Rng) -> Rat {
    Rat::new(rng.random_range(0..=8i64), rng.random_range(1..=4i64))
}

fn n_chain_dist(x: Rat, y: Rat) -> ExtVal {
    if x <= y {
        ExtVal::ZERO
    } else {
        Inf
    }
}

fn sample_natural(rng: &mut ChaCha8Rng) -> Rat {
    Rat::from_integer(rng.random_range(0..=40i64))
}

fn verify_radius_shift(space: &CatalogSpace) -> bool {
    let Some(f) = space.formula() else {
        return false;
    };
    // Ball distance over the formula: ((x d y) - r + s)_+.
    let ball = |x: i64, r: i64, y: i64, s: i64| {
        f.dist(Rat::from_integer(x), Rat::from_integer(y))
            .add(ExtVal::int(s))
            .tminus(ExtVal::int(r))
    };
    ball(0, 0, 1, 1) == ExtVal::int(2) && ball(0, 0, 2, 0) == ExtVal::int(2)
}

fn verify_lower_agreement_fails(space: &CatalogSpace) -> bool {
    let Some(f) = space.formula() else {
        return false;
    };
    // sup_x (x d 0 - x d 1) should be negative: every x contributes -1.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let sampled = (0..1000).all(|_| {
        let x = f.sample_point(&mut rng);
        let (a, b) = (f.dist(x, Rat::from_integer(0)), f.dist(x, Rat::from_integer(1)));
        match (a, b) {
            (Fin(a), Fin(b)) => a - b == Rat::from_integer(-1),
            _ => false,
        }
    });
    // The default finite slice fails the agreement criterion too.
    let slice = f.default_slice().expect("slices satisfy the triangle");
    sampled && !crate::formalballs::underline_agreement(&slice).criterion
}

fn verify_cauchy_not_op_cauchy(space: &CatalogSpace) -> bool {
    let Some(f) = space.formula() else {
        return false;
    };
    let at = Rat::from_integer;
    // Forward distances along 0, 1, 2, ... vanish; backward ones are all
    // infinite, so no tail is op-Cauchy.
    let forward = (0..50).all(|m| (m..50).all(|n| f.dist(at(m), at(n)).is_zero()));
    let backward = (0..50).all(|n| f.dist(at(n + 1), at(n)).is_infinite());
    forward && backward
}

fn verify_ideal_self_distance(space: &CatalogSpace) -> bool {
    let Some(f) = space.formula() else {
        return false;
    };
    // For the ball family {(n, 1/n)}: whichever member (y, 1/y) is chosen,
    // the member (y+1, 1/(y+1)) lies at infinite ball distance from it, so
    // the inner supremum is infinite for every choice and the reverse
    // distance of the family to itself is infinite.
    (1..=50i64).all(|y| {
        let d = f.dist(Rat::from_integer(y + 1), Rat::from_integer(y));
        d.add(Fin(Rat::new(1, y))).tminus(Fin(Rat::new(1, y + 1))) == Inf
    })
}

/// Looks up a catalog space by name.
pub fn get(name: &str) -> Result<CatalogSpace, SpaceError> {
    match name {
        "space-b" => Ok(finite_entry(
            "space-b",
            &["p", "q"],
            &[&["0", "1"], &["2", "0"]],
        )),
        "3-chain" => Ok(finite_entry(
            "3-chain",
            &["a", "b", "c"],
            &[
                &["0", "0", "0"],
                &["inf", "0", "0"],
                &["inf", "inf", "0"],
            ],
        )),
        "strict-2-chain" => Ok(finite_entry(
            "strict-2-chain",
            &["a", "b"],
            &[&["inf", "0"], &["inf", "inf"]],
        )),
        "non-predomain" => Ok(finite_entry(
            "non-predomain",
            &["a", "b"],
            &[&["0", "0"], &["inf", "inf"]],
        )),
        "zero" => Ok(finite_entry(
            "zero",
            &["a", "b"],
            &[&["0", "0"], &["0", "0"]],
        )),
        "right-projection" => Ok(CatalogSpace {
            name: "right-projection",
            kind: CatalogKind::Formula(FormulaSpace {
                carrier: "nonnegative rationals",
                dist: right_projection_dist,
                sample: sample_nonneg_rat,
                default_points: &[(0, 1), (1, 2), (1, 1), (3, 2), (2, 1)],
            }),
            witnesses: vec![
                RegisteredWitness {
                    claim: "radius-shift-identity",
                    witness: "(0,0) to (1,1) and (0,0) to (2,0) both have ball distance 2",
                    verify: verify_radius_shift,
                },
                RegisteredWitness {
                    claim: "lower-agreement-fails",
                    witness: "every x has (x d 0) - (x d 1) = -1, so no point witnesses \
                              the agreement criterion at (0, 1)",
                    verify: verify_lower_agreement_fails,
                },
            ],
        }),
        "n-chain" => Ok(CatalogSpace {
            name: "n-chain",
            kind: CatalogKind::Formula(FormulaSpace {
                carrier: "natural numbers",
                dist: n_chain_dist,
                sample: sample_natural,
                default_points: &[(0, 1), (1, 1), (2, 1), (3, 1), (4, 1)],
            }),
            witnesses: vec![
                RegisteredWitness {
                    claim: "cauchy-not-op-cauchy",
                    witness: "the sequence 0, 1, 2, ... has zero forward distances and \
                              infinite backward distances",
                    verify: verify_cauchy_not_op_cauchy,
                },
                RegisteredWitness {
                    claim: "ideal-self-distance-infinite",
                    witness: "in the ball family {(n, 1/n)}, every member lies at \
                              infinite ball distance from the next one",
                    verify: verify_ideal_self_distance,
                },
            ],
        }),
        other => Err(SpaceError::UnknownName(other.to_string())),
    }
}

/// Entry-pattern profiles for the random generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Any entries, diagonal included.
    Generic,
    /// Zero diagonal enforced before closure.
    Hemimetric,
    /// Zero diagonal and strictly positive off-diagonal entries, so
    /// distinct points never collapse.
    Quasimetric,
    /// Entries in {0, inf}; closure is plain transitive closure.
    CharacteristicRelation,
}

impl Profile {
    pub const ALL: [Profile; 4] = [
        Profile::Generic,
        Profile::Hemimetric,
        Profile::Quasimetric,
        Profile::CharacteristicRelation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Generic => "generic",
            Profile::Hemimetric => "hemimetric",
            Profile::Quasimetric => "quasimetric",
            Profile::CharacteristicRelation => "characteristic-relation",
        }
    }
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Profile, String> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown profile {s:?}"))
    }
}

/// Draws a triangle-closed space: a profile-shaped random matrix with
/// numerators up to 8 and denominators up to 4 (plus infinity at the given
/// percentage), lowered to its min-plus transitive closure. Deterministic
/// per `(n, seed, profile, inf_percent)`.
pub fn random_space_inf(
    n: usize,
    seed: u64,
    profile: Profile,
    inf_percent: u8,
) -> Result<DistanceSpace, SpaceError> {
    if n == 0 {
        return Err(SpaceError::Hypothesis(
            "a random space needs at least one point".into(),
        ));
    }
    if n > MAX_POINTS {
        return Err(SpaceError::TooLarge { n, max: MAX_POINTS });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entry = |x: usize, y: usize| -> ExtVal {
        let inf = rng.random_range(0..100u8) < inf_percent;
        match profile {
            Profile::CharacteristicRelation => {
                if inf {
                    Inf
                } else {
                    ExtVal::ZERO
                }
            }
            Profile::Generic => {
                if inf {
                    Inf
                } else {
                    ExtVal::rat(rng.random_range(0..=8), rng.random_range(1..=4))
                }
            }
            Profile::Hemimetric => {
                if x == y {
                    ExtVal::ZERO
                } else if inf {
                    Inf
                } else {
                    ExtVal::rat(rng.random_range(0..=8), rng.random_range(1..=4))
                }
            }
            Profile::Quasimetric => {
                if x == y {
                    ExtVal::ZERO
                } else if inf {
                    Inf
                } else {
                    ExtVal::rat(rng.random_range(1..=8), rng.random_range(1..=4))
                }
            }
        }
    };
    let mut raw = GRel::zero(n, n);
    for x in 0..n {
        for y in 0..n {
            raw.set(x, y, entry(x, y));
        }
    }
    let closed = raw.transitive_closure();
    debug_assert!(closed.is_distance());
    DistanceSpace::new((0..n).map(|i| format!("x{i}")).collect(), closed)
}

/// [`random_space_inf`] with the default infinity share per profile
/// (half for characteristic relations, 15% otherwise).
pub fn random_space(n: usize, seed: u64, profile: Profile) -> Result<DistanceSpace, SpaceError> {
    let inf_percent = match profile {
        Profile::CharacteristicRelation => 50,
        _ => 15,
    };
    random_space_inf(n, seed, profile, inf_percent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalballs;

    #[test]
    fn every_name_resolves() {
        for name in names() {
            let space = get(name).unwrap();
            assert_eq!(space.name(), *name);
        }
        assert!(matches!(
            get("no-such-space"),
            Err(SpaceError::UnknownName(_))
        ));
    }

    #[test]
    fn finite_entries_have_the_expected_matrices() {
        let b = get("space-b").unwrap();
        let s = b.finite().unwrap();
        assert_eq!(s.labels(), &["p", "q"]);
        assert_eq!(s.dist(0, 1), ExtVal::int(1));
        assert_eq!(s.dist(1, 0), ExtVal::int(2));

        let zero = get("zero").unwrap();
        let s = zero.finite().unwrap();
        assert_eq!(s.n(), 2);
        assert!(s.d().entries().all(|e| e.is_zero()));

        let chain = get("3-chain").unwrap();
        let s = chain.finite().unwrap();
        assert!(s.dist(0, 2).is_zero());
        assert!(s.dist(2, 0).is_infinite());

        let strict = get("strict-2-chain").unwrap();
        let s = strict.finite().unwrap();
        assert!(s.dist(0, 0).is_infinite());
        assert!(s.dist(0, 1).is_zero());

        let flat = get("non-predomain").unwrap();
        let s = flat.finite().unwrap();
        assert!(!s.is_hemimetric());
    }

    #[test]
    fn right_projection_evaluates_to_the_second_argument() {
        let f = get("right-projection").unwrap();
        let f = f.formula().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = f.sample_point(&mut rng);
            let y = f.sample_point(&mut rng);
            assert_eq!(f.dist(x, y), Fin(y));
        }
    }

    #[test]
    fn n_chain_is_the_characteristic_of_the_order() {
        let f = get("n-chain").unwrap();
        let f = f.formula().unwrap();
        assert!(f.dist(Rat::from_integer(2), Rat::from_integer(5)).is_zero());
        assert!(f.dist(Rat::from_integer(5), Rat::from_integer(2)).is_infinite());
        assert!(f.dist(Rat::from_integer(3), Rat::from_integer(3)).is_zero());
    }

    #[test]
    fn formula_triangles_hold_on_sampled_triples() {
        for name in ["right-projection", "n-chain"] {
            let f = get(name).unwrap();
            assert!(f.formula().unwrap().triangle_sampled(42, 1000), "{name}");
        }
    }

    #[test]
    fn registered_witnesses_verify() {
        for name in names() {
            let space = get(name).unwrap();
            for w in space.witnesses() {
                assert!(w.verify(&space), "{name}: {}", w.claim());
            }
        }
        let chain = get("n-chain").unwrap();
        assert_eq!(chain.witnesses().len(), 2);
        let proj = get("right-projection").unwrap();
        assert_eq!(proj.witnesses().len(), 2);
    }

    #[test]
    fn witnesses_reject_the_wrong_kind() {
        let proj = get("right-projection").unwrap();
        let finite = get("zero").unwrap();
        for w in proj.witnesses() {
            assert!(!w.verify(&finite));
        }
    }

    #[test]
    fn default_slices_materialize() {
        let chain = get("n-chain").unwrap();
        let s = chain.formula().unwrap().default_slice().unwrap();
        assert_eq!(s.n(), 5);
        assert_eq!(s.labels()[0], "0");
        assert!(s.dist(0, 4).is_zero());
        assert!(s.dist(4, 0).is_infinite());
        // Finite slices of the chain are upward-noetherian like any finite
        // space; only the registered witnesses see the infinite failure.
        assert!(crate::hyperspace::is_noetherian(&s));

        let proj = get("right-projection").unwrap();
        let s = proj.formula().unwrap().default_slice().unwrap();
        assert_eq!(s.dist(0, 3), ExtVal::rat(3, 2));
        assert!(!formalballs::underline_agreement(&s).criterion);
    }

    #[test]
    fn random_spaces_are_deterministic_and_triangle_closed() {
        for profile in Profile::ALL {
            for seed in 0..20u64 {
                let a = random_space(4, seed, profile).unwrap();
                let b = random_space(4, seed, profile).unwrap();
                assert_eq!(a.d(), b.d());
                assert!(a.d().is_distance());
            }
        }
        let s = random_space(4, 1, Profile::Generic).unwrap();
        assert!(s.d().is_distance());
    }

    #[test]
    fn closure_only_lowers_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let n = 4;
            let mut raw = GRel::zero(n, n);
            for x in 0..n {
                for y in 0..n {
                    let v = if rng.random_range(0..6) == 0 {
                        Inf
                    } else {
                        ExtVal::rat(rng.random_range(0..=8), rng.random_range(1..=4))
                    };
                    raw.set(x, y, v);
                }
            }
            let c = raw.transitive_closure();
            assert!(c.leq(&raw));
            assert!(c.is_distance());
        }
    }

    #[test]
    fn profiles_reproduce_their_predicates() {
        for seed in 0..30u64 {
            let h = random_space(5, seed, Profile::Hemimetric).unwrap();
            assert!(h.is_hemimetric());

            let q = random_space(5, seed, Profile::Quasimetric).unwrap();
            assert!(q.is_hemimetric());
            for x in 0..q.n() {
                for y in 0..q.n() {
                    assert!(x == y || !q.d_equivalent(x, y));
                }
            }

            let c = random_space(5, seed, Profile::CharacteristicRelation).unwrap();
            assert!(c
                .d()
                .entries()
                .all(|e| e.is_zero() || e.is_infinite()));
        }
    }

    #[test]
    fn size_bounds_are_enforced() {
        assert!(matches!(
            random_space(0, 0, Profile::Generic),
            Err(SpaceError::Hypothesis(_))
        ));
        assert!(matches!(
            random_space(13, 0, Profile::Generic),
            Err(SpaceError::TooLarge { n: 13, max: 12 })
        ));
        assert!(random_space(12, 0, Profile::Generic).is_ok());
    }

    #[test]
    fn profile_names_round_trip() {
        for p in Profile::ALL {
            assert_eq!(p.name().parse::<Profile>().unwrap(), p);
        }
        assert!("bogus".parse::<Profile>().is_err());
    }
}
