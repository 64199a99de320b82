//! Distance spaces — finite labelled point sets with a triangle-inequality
//! matrix — and their order-theoretic derivatives: upper/lower hemimetrics,
//! induced relations, directed subsets, suprema/maxima, and Cauchy machinery
//! for ultimately periodic sequences.
//!
//! Nets are represented only as ultimately periodic sequences ([`UPSeq`]).
//! Over a finite space with a discrete value set, a Cauchy net's convergence
//! behavior is determined by its recurrent value set, and ultimately periodic
//! sequences realize exactly those; the reduction is validated against a
//! truncated-net oracle in the tests.

use thiserror::Error;

use crate::extval::ExtVal;
use crate::grel::GRel;
use crate::topology::TopKind;

/// Hard cap on point counts for the subset-enumerating deciders.
pub const MAX_POINTS: usize = 12;

/// A subset of a space's points, as a bitmask over point indices.
pub type Subset = u32;

/// Iterator over the members of a subset mask.
pub fn members(mask: Subset) -> impl Iterator<Item = usize> {
    (0..32usize).filter(move |i| mask & (1 << i) != 0)
}

/// All subset masks of an `n`-point space (including the empty set).
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    assert!(n <= MAX_POINTS);
    0..(1u32 << n)
}

/// Mask with exactly the given points.
pub fn mask_of(points: impl IntoIterator<Item = usize>) -> Subset {
    points.into_iter().fold(0, |m, i| m | (1 << i))
}

/// Errors for building or interrogating distance spaces.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpaceError {
    #[error("matrix is {rows}x{cols}, expected square over {points} points")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        points: usize,
    },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error(
        "triangle inequality fails: d({x}, {y}) = {direct} > {via} = d({x}, {z}) + d({z}, {y})"
    )]
    TriangleViolation {
        x: String,
        z: String,
        y: String,
        direct: ExtVal,
        via: ExtVal,
    },
    #[error("space has {n} points; this operation enumerates subsets and is capped at {max}")]
    TooLarge { n: usize, max: usize },
    #[error("operation requires a max-continuous space")]
    NotContinuous,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("unknown catalog name {0:?}")]
    UnknownName(String),
}

/// Selector for the two subset-bound notions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetRel {
    /// `x = d-sup Y`: `Y <=_d x` and the row of `x` is below the row-sup of `Y`.
    DSup,
    /// `x = d-max Y`: `Y <=_d x` and the column-inf of `Y` is below the column of `x`.
    DMax,
}

/// Cauchy flavors for ultimately periodic sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CauchyMode {
    PreCauchy,
    Cauchy,
    OpCauchy,
}

/// An ultimately periodic sequence of points: a finite prefix followed by a
/// nonempty cycle repeated forever. Stands in for the Cauchy nets of the
/// theory on finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPSeq {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl UPSeq {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> UPSeq {
        assert!(!cycle.is_empty(), "UPSeq cycle must be nonempty");
        UPSeq { prefix, cycle }
    }

    /// The constant sequence at one point.
    pub fn constant(x: usize) -> UPSeq {
        UPSeq::new(vec![], vec![x])
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// The distinct recurrent points (the cycle's value set).
    pub fn recurrent(&self) -> Vec<usize> {
        let mut v = self.cycle.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The value at 0-based position `i` of the unrolled sequence.
    pub fn at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn period_len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }
}

/// A finite labelled point set with a distance matrix over `[0, inf]`
/// satisfying the triangle inequality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSpace {
    labels: Vec<String>,
    d: GRel,
}

impl DistanceSpace {
    /// Validates shape, label uniqueness, and the triangle inequality.
    pub fn new(labels: Vec<String>, d: GRel) -> Result<DistanceSpace, SpaceError> {
        let n = labels.len();
        if d.rows() != n || d.cols() != n {
            return Err(SpaceError::ShapeMismatch {
                rows: d.rows(),
                cols: d.cols(),
                points: n,
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(SpaceError::DuplicateLabel(l.clone()));
            }
        }
        if let Some((x, z, y)) = d.triangle_witness() {
            return Err(SpaceError::TriangleViolation {
                x: labels[x].clone(),
                z: labels[z].clone(),
                y: labels[y].clone(),
                direct: d.get(x, y),
                via: d.get(x, z).add(d.get(z, y)),
            });
        }
        Ok(DistanceSpace { labels, d })
    }

    /// Builds from a row-major table with default labels `x0, x1, ...`.
    pub fn from_rows(rows: Vec<Vec<ExtVal>>) -> Result<DistanceSpace, SpaceError> {
        let labels = (0..rows.len()).map(|i| format!("x{i}")).collect();
        DistanceSpace::new(labels, GRel::square(rows))
    }

    /// Same labels, different matrix (for derived distances on the carrier).
    pub fn with_matrix(&self, d: GRel) -> Result<DistanceSpace, SpaceError> {
        DistanceSpace::new(self.labels.clone(), d)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn d(&self) -> &GRel {
        &self.d
    }

    pub fn dist(&self, x: usize, y: usize) -> ExtVal {
        self.d.get(x, y)
    }

    /// The opposite space (transposed matrix).
    pub fn op(&self) -> DistanceSpace {
        DistanceSpace {
            labels: self.labels.clone(),
            d: self.d.op(),
        }
    }

    /// Guards subset-enumerating operations.
    pub fn check_size(&self) -> Result<(), SpaceError> {
        if self.n() > MAX_POINTS {
            Err(SpaceError::TooLarge {
                n: self.n(),
                max: MAX_POINTS,
            })
        } else {
            Ok(())
        }
    }

    /// Upper hemimetric: `(x, z) -> sup_y (d(x,y) - d(z,y))_+`.
    ///
    /// Always a hemimetric (zero diagonal, triangle), which is asserted.
    pub fn upper_hemimetric(&self) -> GRel {
        let n = self.n();
        let h = GRel::from_fn(n, n, |x, z| {
            ExtVal::sup_of((0..n).map(|y| self.dist(x, y).tminus(self.dist(z, y))))
        });
        debug_assert!(h.zero_diagonal() && h.is_distance());
        h
    }

    /// Lower hemimetric: `(z, y) -> sup_x (d(x,y) - d(x,z))_+`.
    pub fn lower_hemimetric(&self) -> GRel {
        let n = self.n();
        let h = GRel::from_fn(n, n, |z, y| {
            ExtVal::sup_of((0..n).map(|x| self.dist(x, y).tminus(self.dist(x, z))))
        });
        debug_assert!(h.zero_diagonal() && h.is_distance());
        h
    }

    /// The induced preorder `x <=_d y <=> d(x, y) = 0`, as a characteristic
    /// matrix.
    pub fn leq_rel(&self) -> GRel {
        let n = self.n();
        GRel::characteristic(n, n, |x, y| self.dist(x, y).is_zero())
    }

    /// The epsilon-strict relation `x <_eps y <=> d(x, y) < eps`.
    pub fn lt_eps_rel(&self, eps: ExtVal) -> GRel {
        assert!(!eps.is_zero(), "epsilon must be positive");
        let n = self.n();
        GRel::characteristic(n, n, |x, y| self.dist(x, y) < eps)
    }

    /// The strict order: `x <_d y` iff the up-set of `x` is a neighbourhood
    /// of `y` in the ball topology of the lower hemimetric. On finite spaces
    /// the minimal such neighbourhood of `y` is the lower-hemimetric zero
    /// cone `{ z : lower(y, z) = 0 }`, so the decision rule is: every such
    /// `z` satisfies `d(x, z) = 0`.
    pub fn strict_rel(&self) -> GRel {
        let n = self.n();
        let lower = self.lower_hemimetric();
        GRel::characteristic(n, n, |x, y| {
            (0..n).all(|z| !lower.get(y, z).is_zero() || self.dist(x, z).is_zero())
        })
    }

    /// Directedness witness: a member `y` of `Y` with `max_{z in Y} d(z, y) = 0`.
    ///
    /// On finite spaces `Y` is `d`-directed iff such an internal upper bound
    /// exists (the `F = Y` case dominates every finite `F`, and infima over
    /// finite sets are attained); the general all-finite-subsets definition
    /// is implemented alongside and tested equal.
    pub fn directed_witness(&self, y_set: Subset) -> Option<usize> {
        self.directed_witness_rel(&self.d, y_set)
    }

    /// Directedness with respect to an arbitrary square matrix over the same
    /// carrier (used with characteristic matrices of auxiliary relations).
    pub fn directed_witness_rel(&self, rel: &GRel, y_set: Subset) -> Option<usize> {
        members(y_set).find(|&y| members(y_set).all(|z| rel.get(z, y).is_zero()))
    }

    pub fn is_directed(&self, y_set: Subset) -> bool {
        self.directed_witness(y_set).is_some()
    }

    /// The definitional check: for every finite (= every) `F` inside `Y`,
    /// `inf_{y in Y} sup_{z in F} d(z, y) = 0`. Kept for cross-validation.
    pub fn is_directed_all_finite_subsets(&self, y_set: Subset) -> bool {
        let subs: Vec<Subset> = all_subsets(self.n())
            .filter(|f| f & !y_set == 0)
            .collect();
        subs.iter().all(|&f| {
            let inf = ExtVal::inf_of(members(y_set).map(|y| {
                ExtVal::sup_of(members(f).map(|z| self.dist(z, y)))
            }));
            inf.is_zero()
        })
    }

    /// `Y` is `d`-final: every member is at distance zero into `Y`.
    pub fn is_final(&self, y_set: Subset) -> bool {
        members(y_set).all(|x| {
            ExtVal::inf_of(members(y_set).map(|y| self.dist(x, y))).is_zero()
        })
    }

    /// `Y` is `d`-initial: every member is at distance zero from `Y`.
    pub fn is_initial(&self, y_set: Subset) -> bool {
        members(y_set).all(|x| {
            ExtVal::inf_of(members(y_set).map(|y| self.dist(y, x))).is_zero()
        })
    }

    /// Decides `x = d-sup Y` or `x = d-max Y` by the definitions.
    pub fn bound_check(&self, y_set: Subset, x: usize, kind: SubsetRel) -> bool {
        let below = members(y_set).all(|y| self.dist(y, x).is_zero());
        if !below {
            return false;
        }
        let n = self.n();
        match kind {
            SubsetRel::DSup => (0..n).all(|w| {
                self.dist(x, w) <= ExtVal::sup_of(members(y_set).map(|y| self.dist(y, w)))
            }),
            SubsetRel::DMax => (0..n).all(|w| {
                ExtVal::inf_of(members(y_set).map(|y| self.dist(w, y))) <= self.dist(w, x)
            }),
        }
    }

    /// All `x` satisfying `bound_check(Y, x, kind)`.
    pub fn bounds_of(&self, y_set: Subset, kind: SubsetRel) -> Vec<usize> {
        (0..self.n())
            .filter(|&x| self.bound_check(y_set, x, kind))
            .collect()
    }

    /// Cauchy check for an ultimately periodic sequence.
    ///
    /// Both Cauchy and pre-Cauchy reduce to: every ordered pair of cycle
    /// values (including a value against itself) is at distance zero; the
    /// prefix never matters since tails may start past it. Op-Cauchy is the
    /// same condition in the opposite space, with its tail chosen
    /// independently.
    pub fn seq_cauchy(&self, s: &UPSeq, mode: CauchyMode) -> bool {
        let rec = s.recurrent();
        rec.iter().all(|&u| {
            rec.iter().all(|&v| match mode {
                CauchyMode::PreCauchy | CauchyMode::Cauchy => self.dist(u, v).is_zero(),
                CauchyMode::OpCauchy => self.dist(v, u).is_zero(),
            })
        })
    }

    /// Convergence of an ultimately periodic sequence to `x` in one of the
    /// derived topologies, via the limit characterizations. Each case is the
    /// eventual-membership condition for the topology's subbasis evaluated on
    /// the recurrent values: balls bound the limsup of columns by the column
    /// of `x`, lower holes bound the liminf of columns from below, upper
    /// holes do the same for rows, Smyth conjoins ball and lower (columns
    /// converge to the column of `x`), Yoneda conjoins upper and lower.
    pub fn seq_limit_check(&self, s: &UPSeq, x: usize, top: TopKind) -> bool {
        let rec = s.recurrent();
        let n = self.n();
        let ball = || {
            (0..n).all(|c| {
                ExtVal::sup_of(rec.iter().map(|&v| self.dist(c, v))) <= self.dist(c, x)
            })
        };
        let lower = || {
            (0..n).all(|c| {
                ExtVal::inf_of(rec.iter().map(|&v| self.dist(c, v))) >= self.dist(c, x)
            })
        };
        let upper = || {
            (0..n).all(|w| {
                ExtVal::inf_of(rec.iter().map(|&v| self.dist(v, w))) >= self.dist(x, w)
            })
        };
        let op_ball = || {
            (0..n).all(|w| {
                ExtVal::sup_of(rec.iter().map(|&v| self.dist(v, w))) <= self.dist(x, w)
            })
        };
        match top {
            TopKind::Ball => ball(),
            TopKind::Lower => lower(),
            TopKind::Smyth => ball() && lower(),
            TopKind::Upper => upper(),
            TopKind::Yoneda => upper() && lower(),
            TopKind::SymmetricBall => ball() && op_ball(),
        }
    }

    /// Points with zero self-distance.
    pub fn self_zero_points(&self) -> Vec<usize> {
        (0..self.n()).filter(|&x| self.dist(x, x).is_zero()).collect()
    }

    /// Nonempty subsets all of whose ordered pairs (including repeats) are at
    /// distance zero — the recurrent value sets of Cauchy sequences.
    pub fn zero_cliques(&self) -> Vec<Subset> {
        let mut out = Vec::new();
        for v in all_subsets(self.n()).skip(1) {
            let ok = members(v)
                .all(|u| members(v).all(|w| self.dist(u, w).is_zero()));
            if ok {
                out.push(v);
            }
        }
        out
    }

    /// Points with identical rows and columns.
    pub fn d_equivalent(&self, x: usize, y: usize) -> bool {
        let n = self.n();
        (0..n).all(|w| self.dist(x, w) == self.dist(y, w))
            && (0..n).all(|w| self.dist(w, x) == self.dist(w, y))
    }

    /// Merges d-equivalent points, keeping the first label of each class.
    /// Returns the quotient space and the class index of every point.
    pub fn quotient(&self) -> (DistanceSpace, Vec<usize>) {
        let n = self.n();
        let mut class = vec![usize::MAX; n];
        let mut reps: Vec<usize> = Vec::new();
        for (x, slot) in class.iter_mut().enumerate() {
            match reps.iter().position(|&r| self.d_equivalent(r, x)) {
                Some(c) => *slot = c,
                None => {
                    *slot = reps.len();
                    reps.push(x);
                }
            }
        }
        let labels = reps.iter().map(|&r| self.labels[r].clone()).collect();
        let d = GRel::from_fn(reps.len(), reps.len(), |i, j| self.dist(reps[i], reps[j]));
        let q = DistanceSpace::new(labels, d).expect("quotient preserves the triangle inequality");
        (q, class)
    }

    /// The subspace on the given points (triangle inequality restricts).
    pub fn restrict(&self, b_set: Subset) -> DistanceSpace {
        let pts: Vec<usize> = members(b_set).filter(|&i| i < self.n()).collect();
        let labels = pts.iter().map(|&i| self.labels[i].clone()).collect();
        let d = GRel::from_fn(pts.len(), pts.len(), |i, j| self.dist(pts[i], pts[j]));
        DistanceSpace::new(labels, d).expect("restriction preserves the triangle inequality")
    }

    /// Finite grid of radii/thresholds: zero, every finite entry value,
    /// midpoints of consecutive ones, and one value past the maximum.
    pub fn value_grid(&self) -> Vec<ExtVal> {
        value_grid_of(self.d.entries())
    }

    /// The distance matrix is a hemimetric (zero diagonal).
    pub fn is_hemimetric(&self) -> bool {
        self.d.zero_diagonal()
    }
}

/// Grid of thresholds derived from an arbitrary collection of values:
/// `{0}`, the finite values, midpoints of consecutive distinct finite
/// values, and one value past the maximum.
pub fn value_grid_of(values: impl IntoIterator<Item = ExtVal>) -> Vec<ExtVal> {
    let mut fin: Vec<ExtVal> = values.into_iter().filter(|v| v.is_finite()).collect();
    fin.push(ExtVal::ZERO);
    fin.sort();
    fin.dedup();
    let mut grid = fin.clone();
    for w in fin.windows(2) {
        grid.push(w[0].midpoint(w[1]));
    }
    grid.push(fin.last().copied().unwrap().add(ExtVal::int(1)));
    grid.sort();
    grid.dedup();
    grid
}

/// Finite-horizon oracle for [`DistanceSpace::seq_cauchy`]: unrolls the
/// sequence to `5 * period * k` steps and evaluates the tail sup (Cauchy) or
/// the recurrent-window sup (pre-Cauchy) over a late full cycle.
pub fn seq_cauchy_truncated(
    space: &DistanceSpace,
    s: &UPSeq,
    mode: CauchyMode,
    k: usize,
) -> bool {
    let c = s.cycle().len();
    let len = 5 * s.period_len() * k.max(1);
    let gamma_range = (len - 2 * c)..(len - c);
    let dist = |a: usize, b: usize| match mode {
        CauchyMode::PreCauchy | CauchyMode::Cauchy => space.dist(s.at(a), s.at(b)),
        CauchyMode::OpCauchy => space.dist(s.at(b), s.at(a)),
    };
    gamma_range.clone().all(|g| {
        let window: Box<dyn Iterator<Item = usize>> = match mode {
            // Tail sup from gamma (exclusive) to the horizon.
            CauchyMode::Cauchy | CauchyMode::OpCauchy => Box::new(g + 1..len),
            // Limsup: only the recurrent window at the horizon.
            CauchyMode::PreCauchy => Box::new(len - c..len),
        };
        ExtVal::sup_of(window.map(|d| dist(g, d))).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extval::{ExtVal, Inf};
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

    /// Characteristic matrix of the reflexive chain a <= b <= c.
    fn chain3() -> DistanceSpace {
        space(&[&["0", "0", "0"], &["inf", "0", "0"], &["inf", "inf", "0"]])
    }

    /// Two points: one at distance zero to everything, one at inf.
    fn flat_sharp() -> DistanceSpace {
        space(&[&["0", "0"], &["inf", "inf"]])
    }

    #[test]
    fn construction_rejects_triangle_violation() {
        let err = DistanceSpace::from_rows(vec![
            vec![ev("0"), ev("1"), ev("5")],
            vec![ev("inf"), ev("0"), ev("1")],
            vec![ev("inf"), ev("inf"), ev("0")],
        ])
        .unwrap_err();
        match err {
            SpaceError::TriangleViolation { direct, via, .. } => {
                assert_eq!(direct, ev("5"));
                assert_eq!(via, ev("2"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn hemimetrics_of_space_b_are_d() {
        let s = space_b();
        assert_eq!(&s.upper_hemimetric(), s.d());
        assert_eq!(&s.lower_hemimetric(), s.d());
        // Spot value: upper(q, p) = max((2-0)_+, (0-1)_+) = 2.
        assert_eq!(s.upper_hemimetric().get(1, 0), ev("2"));
    }

    #[test]
    fn hemimetrics_of_chain_are_the_chain() {
        let s = chain3();
        assert_eq!(&s.upper_hemimetric(), s.d());
        assert_eq!(&s.lower_hemimetric(), s.d());
    }

    #[test]
    fn hemimetrics_of_flat_sharp() {
        let s = flat_sharp();
        assert_eq!(s.upper_hemimetric().get(1, 0), Inf);
        assert_eq!(s.lower_hemimetric().get(1, 0), ExtVal::ZERO);
    }

    #[test]
    fn induced_relations() {
        let s = space_b();
        assert_eq!(s.leq_rel(), GRel::characteristic(2, 2, |x, y| x == y));
        let lt = s.lt_eps_rel(ev("3/2"));
        assert!(lt.get(0, 1).is_zero());
        assert!(!lt.get(1, 0).is_zero());
    }

    #[test]
    fn strict_rel_of_chain_is_the_chain() {
        let s = chain3();
        assert_eq!(s.strict_rel(), GRel::characteristic(3, 3, |x, y| x <= y));
    }

    #[test]
    fn directedness() {
        let c = chain3();
        assert_eq!(c.directed_witness(mask_of([0, 1])), Some(1));
        let b = space_b();
        assert!(!b.is_directed(mask_of([0, 1])));
        assert!(b.is_directed(mask_of([0])));
        assert!(!b.is_directed(0)); // empty set is never directed
    }

    #[test]
    fn directed_implies_final() {
        for s in [space_b(), chain3(), flat_sharp()] {
            for y in all_subsets(s.n()) {
                if s.is_directed(y) {
                    assert!(s.is_final(y));
                }
            }
        }
    }

    #[test]
    fn bound_checks() {
        let c = chain3();
        assert!(c.bound_check(mask_of([0, 1]), 1, SubsetRel::DMax));
        assert!(!c.bound_check(mask_of([0, 1]), 0, SubsetRel::DMax));
        let fs = flat_sharp();
        assert!(fs.bound_check(mask_of([0]), 1, SubsetRel::DMax));
        let b = space_b();
        assert!(b.bound_check(mask_of([0]), 0, SubsetRel::DMax));
        assert!(b.bound_check(mask_of([0]), 0, SubsetRel::DSup));
    }

    /// d-max for characteristic matrices of a poset order agrees with the
    /// classical maximum, brute-forced over all subsets.
    #[test]
    fn dmax_matches_classical_maximum_on_posets() {
        // Divisibility order on {1, 2, 3, 4, 6, 12}.
        let elems = [1usize, 2, 3, 4, 6, 12];
        let n = elems.len();
        let d = GRel::characteristic(n, n, |x, y| elems[y].is_multiple_of(elems[x]));
        let s = DistanceSpace::new(
            elems.iter().map(|e| e.to_string()).collect(),
            d,
        )
        .unwrap();
        for y in all_subsets(n) {
            for x in 0..n {
                let classical = members(y).all(|m| elems[x].is_multiple_of(elems[m]))
                    && members(y).any(|m| m == x);
                assert_eq!(
                    s.bound_check(y, x, SubsetRel::DMax),
                    classical,
                    "subset {y:b}, candidate {x}"
                );
            }
        }
    }

    #[test]
    fn cauchy_ignores_prefix() {
        let b = space_b();
        let s = UPSeq::new(vec![1], vec![0]); // prefix (q), cycle (p)
        assert!(b.seq_cauchy(&s, CauchyMode::Cauchy));
        assert!(b.seq_cauchy(&s, CauchyMode::PreCauchy));
        assert!(b.seq_cauchy(&s, CauchyMode::OpCauchy));
    }

    #[test]
    fn alternating_cycle_is_not_cauchy() {
        let b = space_b();
        let s = UPSeq::new(vec![], vec![0, 1]);
        assert!(!b.seq_cauchy(&s, CauchyMode::Cauchy));
    }

    #[test]
    fn truncated_net_oracle_agrees() {
        let spaces = [space_b(), chain3(), flat_sharp()];
        let seqs = [
            UPSeq::new(vec![1], vec![0]),
            UPSeq::new(vec![], vec![0, 1]),
            UPSeq::new(vec![0, 0, 1], vec![1]),
            UPSeq::constant(0),
        ];
        for sp in &spaces {
            for sq in &seqs {
                for mode in [CauchyMode::PreCauchy, CauchyMode::Cauchy, CauchyMode::OpCauchy] {
                    let decided = sp.seq_cauchy(sq, mode);
                    for k in 1..=4 {
                        assert_eq!(
                            seq_cauchy_truncated(sp, sq, mode, k),
                            decided,
                            "space {:?} seq {:?} mode {:?} k {}",
                            sp.labels(),
                            sq,
                            mode,
                            k
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn smyth_limit_via_equal_columns() {
        let s = flat_sharp();
        let seq = UPSeq::constant(0);
        // Columns of a and b both read (0, inf): a-cycle converges to b.
        assert!(s.seq_limit_check(&seq, 1, TopKind::Smyth));
        // Upper condition fails: row of a is (0,0), row of b is (inf, inf).
        assert!(!s.seq_limit_check(&seq, 1, TopKind::Yoneda));
        assert!(s.seq_limit_check(&seq, 1, TopKind::Ball));
    }

    #[test]
    fn constant_self_zero_cycle_converges_everywhere() {
        let b = space_b();
        let seq = UPSeq::constant(0);
        for top in [
            TopKind::Ball,
            TopKind::Lower,
            TopKind::Smyth,
            TopKind::Upper,
            TopKind::Yoneda,
            TopKind::SymmetricBall,
        ] {
            assert!(b.seq_limit_check(&seq, 0, top), "topology {top:?}");
        }
    }

    #[test]
    fn equivalence_and_quotient() {
        let dup = space(&[&["0", "0", "1"], &["0", "0", "1"], &["1", "1", "0"]]);
        assert!(dup.d_equivalent(0, 1));
        let (q, class) = dup.quotient();
        assert_eq!(q.n(), 2);
        assert_eq!(class, vec![0, 0, 1]);
        let (q2, _) = q.quotient();
        assert_eq!(q2, q);
        let b = space_b();
        assert_eq!(b.quotient().0, b);
    }

    #[test]
    fn restriction() {
        let c = chain3();
        let r = c.restrict(mask_of([0, 2]));
        assert_eq!(r.n(), 2);
        assert_eq!(r.dist(0, 1), ExtVal::ZERO);
        assert_eq!(r.dist(1, 0), Inf);
    }

    #[test]
    fn value_grid_contains_entries_midpoints_and_top() {
        let b = space_b();
        let g = b.value_grid();
        for v in ["0", "1/2", "1", "3/2", "2", "3"] {
            assert!(g.contains(&ev(v)), "missing {v}");
        }
    }

    fn arb_entry() -> impl Strategy<Value = ExtVal> {
        prop_oneof![
            4 => (0i64..=8, 1i64..=4).prop_map(|(n, d)| ExtVal::rat(n, d)),
            1 => Just(ExtVal::INF),
        ]
    }

    fn arb_space(n: usize) -> impl Strategy<Value = DistanceSpace> {
        proptest::collection::vec(arb_entry(), n * n).prop_map(move |vs| {
            let raw = GRel::from_fn(n, n, |x, y| vs[x * n + y]);
            DistanceSpace::from_rows(
                (0..n)
                    .map(|x| (0..n).map(|y| raw.transitive_closure().get(x, y)).collect())
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        /// The derived hemimetrics really are hemimetrics and bound d by
        /// composition on both sides.
        #[test]
        fn hemimetric_composition_bounds(s in arb_space(4)) {
            let upper = s.upper_hemimetric();
            let lower = s.lower_hemimetric();
            prop_assert!(upper.zero_diagonal() && upper.is_distance());
            prop_assert!(lower.zero_diagonal() && lower.is_distance());
            prop_assert!(s.d().leq(&s.d().compose(&lower)));
            prop_assert!(s.d().leq(&upper.compose(s.d())));
        }

        /// For hemimetric d both derived hemimetrics collapse to d.
        #[test]
        fn hemimetric_fixed_point(s in arb_space(4)) {
            let mut rows: Vec<Vec<ExtVal>> = (0..s.n())
                .map(|x| (0..s.n()).map(|y| s.dist(x, y)).collect())
                .collect();
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = ExtVal::ZERO;
            }
            let h = DistanceSpace::from_rows(rows).unwrap();
            prop_assert_eq!(&h.upper_hemimetric(), h.d());
            prop_assert_eq!(&h.lower_hemimetric(), h.d());
        }

        /// The shortcut directedness criterion matches the definition.
        #[test]
        fn directedness_shortcut_is_sound(s in arb_space(4)) {
            for y in all_subsets(s.n()) {
                let general = y != 0 && s.is_directed_all_finite_subsets(y);
                prop_assert_eq!(s.is_directed(y), general);
            }
        }

        /// The truncated-net oracle agrees with the cycle-pair rule.
        #[test]
        fn truncated_oracle_matches(s in arb_space(4), pre in proptest::collection::vec(0usize..4, 0..3), cyc in proptest::collection::vec(0usize..4, 1..4)) {
            let seq = UPSeq::new(pre, cyc);
            for mode in [CauchyMode::PreCauchy, CauchyMode::Cauchy, CauchyMode::OpCauchy] {
                let decided = s.seq_cauchy(&seq, mode);
                for k in 1..=4 {
                    prop_assert_eq!(seq_cauchy_truncated(&s, &seq, mode, k), decided);
                }
            }
        }
    }
}
