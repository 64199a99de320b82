//! Dense matrices over `[0, inf]` — generalized relations between finite
//! point sets — with min-plus composition, the uniform preorder, moduli,
//! and composition through the zero-set of an exponent.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::extval::{ExtVal, Fin};

/// A `rows x cols` matrix of extended values, stored row-major.
///
/// Entry `(x, y)` is read as the distance/cost from source point `x` to
/// destination point `y`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GRel {
    rows: usize,
    cols: usize,
    entries: Vec<ExtVal>,
}

impl GRel {
    /// Builds a matrix from an entry function.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExtVal) -> GRel {
        let mut entries = Vec::with_capacity(rows * cols);
        for x in 0..rows {
            for y in 0..cols {
                entries.push(f(x, y));
            }
        }
        GRel { rows, cols, entries }
    }

    /// Builds a square matrix from a row-major table of entries.
    pub fn square(entries: Vec<Vec<ExtVal>>) -> GRel {
        let n = entries.len();
        assert!(entries.iter().all(|r| r.len() == n), "ragged square matrix");
        GRel::from_fn(n, n, |x, y| entries[x][y])
    }

    /// The characteristic matrix of a classical relation: `0` where related,
    /// `inf` otherwise.
    pub fn characteristic(
        rows: usize,
        cols: usize,
        mut related: impl FnMut(usize, usize) -> bool,
    ) -> GRel {
        GRel::from_fn(rows, cols, |x, y| {
            if related(x, y) {
                ExtVal::ZERO
            } else {
                ExtVal::INF
            }
        })
    }

    /// The everywhere-zero matrix.
    pub fn zero(rows: usize, cols: usize) -> GRel {
        GRel::from_fn(rows, cols, |_, _| ExtVal::ZERO)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, y: usize) -> ExtVal {
        debug_assert!(x < self.rows && y < self.cols);
        self.entries[x * self.cols + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: ExtVal) {
        debug_assert!(x < self.rows && y < self.cols);
        self.entries[x * self.cols + y] = v;
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ExtVal> + '_ {
        self.entries.iter().copied()
    }

    /// The distinct entry values, sorted ascending.
    pub fn value_set(&self) -> Vec<ExtVal> {
        let mut vals = self.entries.clone();
        vals.sort();
        vals.dedup();
        vals
    }

    /// Min-plus composition: `(a . b)(x, y) = inf_z (a(x, z) + b(z, y))`.
    pub fn compose(&self, other: &GRel) -> GRel {
        assert_eq!(self.cols, other.rows, "composition dimension mismatch");
        GRel::from_fn(self.rows, other.cols, |x, y| {
            ExtVal::inf_of((0..self.cols).map(|z| self.get(x, z).add(other.get(z, y))))
        })
    }

    /// Transpose.
    pub fn op(&self) -> GRel {
        GRel::from_fn(self.cols, self.rows, |x, y| self.get(y, x))
    }

    /// Pointwise maximum with the transpose (square matrices only).
    pub fn sym(&self) -> GRel {
        assert_eq!(self.rows, self.cols, "sym needs a square matrix");
        GRel::from_fn(self.rows, self.cols, |x, y| self.get(x, y).max(self.get(y, x)))
    }

    /// Pointwise maximum of two same-shape matrices.
    pub fn join(&self, other: &GRel) -> GRel {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        GRel::from_fn(self.rows, self.cols, |x, y| self.get(x, y).max(other.get(x, y)))
    }

    /// Pointwise minimum of two same-shape matrices.
    pub fn meet(&self, other: &GRel) -> GRel {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        GRel::from_fn(self.rows, self.cols, |x, y| self.get(x, y).min(other.get(x, y)))
    }

    /// Entrywise scaling by a natural number (`0 * inf = 0`).
    pub fn scale(&self, n: u32) -> GRel {
        GRel::from_fn(self.rows, self.cols, |x, y| self.get(x, y).scale(n))
    }

    /// Pointwise order: every entry of `self` at most the matching entry of
    /// `other`.
    pub fn leq(&self, other: &GRel) -> bool {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries.iter().zip(&other.entries).all(|(a, b)| a <= b)
    }

    /// First entry where `self > other`, if any.
    pub fn leq_witness(&self, other: &GRel) -> Option<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        (0..self.rows)
            .flat_map(|x| (0..self.cols).map(move |y| (x, y)))
            .find(|&(x, y)| self.get(x, y) > other.get(x, y))
    }

    /// The uniform preorder `self <~ other`.
    ///
    /// On finite point sets this is zero-set containment: every pair where
    /// `other` vanishes must also be a zero of `self`.
    pub fn uniform_leq(&self, other: &GRel) -> bool {
        self.uniform_leq_witness(other).is_none()
    }

    /// First pair violating the uniform preorder, if any.
    pub fn uniform_leq_witness(&self, other: &GRel) -> Option<(usize, usize)> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        (0..self.rows)
            .flat_map(|x| (0..self.cols).map(move |y| (x, y)))
            .find(|&(x, y)| other.get(x, y).is_zero() && !self.get(x, y).is_zero())
    }

    /// The modulus `(self / other)(r) = sup { self(x, y) : other(x, y) <= r }`,
    /// sampled at every value occurring in `other`.
    pub fn modulus(&self, other: &GRel) -> Vec<(ExtVal, ExtVal)> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        other
            .value_set()
            .into_iter()
            .map(|r| {
                let sup = ExtVal::sup_of(
                    self.entries
                        .iter()
                        .zip(&other.entries)
                        .filter(|(_, b)| **b <= r)
                        .map(|(a, _)| *a),
                );
                (r, sup)
            })
            .collect()
    }

    /// Composition through the asymptotic exponent of `other`:
    /// `sup_n (self . n*other)`, which on finite point sets collapses to
    /// `(x, y) -> inf { self(x, z) : other(z, y) = 0 }`.
    pub fn phi_compose(&self, other: &GRel) -> GRel {
        assert_eq!(self.cols, other.rows, "composition dimension mismatch");
        GRel::from_fn(self.rows, other.cols, |x, y| {
            ExtVal::inf_of(
                (0..self.cols)
                    .filter(|&z| other.get(z, y).is_zero())
                    .map(|z| self.get(x, z)),
            )
        })
    }

    /// Min-plus transitive closure of a square matrix: the largest matrix
    /// below `self` satisfying the triangle inequality, computed by
    /// all-pairs relaxation. Self-distances are not forced to zero.
    pub fn transitive_closure(&self) -> GRel {
        assert_eq!(self.rows, self.cols, "closure needs a square matrix");
        let n = self.rows;
        let mut c = self.clone();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = c.get(i, k).add(c.get(k, j));
                    if via < c.get(i, j) {
                        c.set(i, j, via);
                    }
                }
            }
        }
        c
    }

    /// Triangle inequality `self <= self . self` for square matrices.
    pub fn is_distance(&self) -> bool {
        self.triangle_witness().is_none()
    }

    /// A violating triple `(x, z, y)` with `self(x, y) > self(x, z) + self(z, y)`,
    /// if the triangle inequality fails.
    pub fn triangle_witness(&self) -> Option<(usize, usize, usize)> {
        assert_eq!(self.rows, self.cols, "triangle needs a square matrix");
        let n = self.rows;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.get(x, y) > self.get(x, z).add(self.get(z, y)) {
                        return Some((x, z, y));
                    }
                }
            }
        }
        None
    }

    /// All entries on the diagonal are zero.
    pub fn zero_diagonal(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        (0..self.rows).all(|x| self.get(x, x).is_zero())
    }
}

impl fmt::Debug for GRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GRel {}x{} [", self.rows, self.cols)?;
        for x in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|y| self.get(x, y).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Stabilization bound for the truncated exponent oracle: the smallest `n`
/// making every positive step of `other` overtake every finite entry of
/// `self`, plus one.
pub fn phi_stabilization_bound(a: &GRel, b: &GRel) -> u32 {
    let max_fin = a.entries().filter(|v| v.is_finite()).max();
    let min_pos = b
        .entries()
        .filter(|v| v.is_finite() && !v.is_zero())
        .min();
    match (max_fin, min_pos) {
        (Some(Fin(m)), Some(Fin(p))) => {
            let bound = (m / p).to_integer() + 1;
            u32::try_from(bound).unwrap_or(u32::MAX).max(1)
        }
        _ => 1,
    }
}

/// Truncated exponent composition `sup_{n <= bound} (a . n*b)`, the finite
/// approximant whose limit is `phi_compose`.
pub fn phi_compose_truncated(a: &GRel, b: &GRel, bound: u32) -> GRel {
    let mut acc = a.compose(&b.scale(0));
    for n in 1..=bound {
        acc = acc.join(&a.compose(&b.scale(n)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extval::Inf;
    use proptest::prelude::*;

    fn ev(s: &str) -> ExtVal {
        s.parse().unwrap()
    }

    fn mat(rows: &[&[&str]]) -> GRel {
        GRel::square(
            rows.iter()
                .map(|r| r.iter().map(|s| ev(s)).collect())
                .collect(),
        )
    }

    /// Two points p, q with d(p,q) = 1 and d(q,p) = 2: a quasimetric whose
    /// composition with itself reproduces it exactly.
    fn space_b() -> GRel {
        mat(&[&["0", "1"], &["2", "0"]])
    }

    #[test]
    fn compose_space_b_is_idempotent() {
        let d = space_b();
        assert_eq!(d.compose(&d), d);
    }

    #[test]
    fn compose_empty_middle_is_inf() {
        let a = GRel::from_fn(2, 0, |_, _| unreachable!());
        let b = GRel::from_fn(0, 2, |_, _| unreachable!());
        let c = a.compose(&b);
        assert!(c.entries().all(|v| v.is_infinite()));
    }

    #[test]
    fn uniform_leq_is_zero_set_containment() {
        let d = space_b();
        // Zero set of d is the diagonal; the zero matrix vanishes everywhere.
        let z = GRel::zero(2, 2);
        assert!(z.uniform_leq(&d));
        assert!(!d.uniform_leq(&z));
        assert_eq!(d.uniform_leq_witness(&z), Some((0, 1)));
    }

    #[test]
    fn modulus_space_b() {
        let d = space_b();
        let m = d.modulus(&d);
        assert_eq!(
            m,
            vec![
                (ev("0"), ev("0")),
                (ev("1"), ev("1")),
                (ev("2"), ev("2")),
            ]
        );
    }

    #[test]
    fn modulus_over_zero_relation_is_global_sup() {
        let a = space_b();
        let z = GRel::zero(2, 2);
        assert_eq!(a.modulus(&z), vec![(ev("0"), ev("2"))]);
    }

    #[test]
    fn modulus_limit_agrees_with_uniform_preorder() {
        let d = space_b();
        let z = GRel::zero(2, 2);
        // z <~ d: the modulus of z over d at r = 0 vanishes.
        assert_eq!(z.modulus(&d)[0], (ev("0"), ev("0")));
        // d <~ z fails: the modulus of d over z at r = 0 is positive.
        assert_eq!(d.modulus(&z)[0], (ev("0"), ev("2")));
    }

    #[test]
    fn phi_compose_over_zero_broadcasts_row_minima() {
        let a = mat(&[&["3", "1"], &["inf", "2"]]);
        let z = GRel::zero(2, 2);
        let p = a.phi_compose(&z);
        assert_eq!(p, mat(&[&["1", "1"], &["2", "2"]]));
    }

    #[test]
    fn phi_compose_chain_relation_is_itself() {
        // Characteristic matrix of the reflexive chain a <= b <= c.
        let le = GRel::characteristic(3, 3, |x, y| x <= y);
        assert_eq!(le.phi_compose(&le), le);
    }

    #[test]
    fn phi_truncation_diverges_without_zero_targets() {
        // One middle point with a positive step: the closed form is inf while
        // every truncation stays finite but grows past all entries of `a`.
        let a = mat(&[&["1"]]);
        let b = mat(&[&["1"]]);
        assert_eq!(a.phi_compose(&b).get(0, 0), Inf);
        let bound = phi_stabilization_bound(&a, &b);
        let t = phi_compose_truncated(&a, &b, bound);
        assert!(t.get(0, 0) > ev("1"));
    }

    #[test]
    fn closure_satisfies_triangle_and_shrinks() {
        let raw = mat(&[&["0", "1", "5"], &["inf", "0", "1"], &["inf", "inf", "0"]]);
        let c = raw.transitive_closure();
        assert!(c.is_distance());
        assert!(c.leq(&raw));
        assert_eq!(c.get(0, 2), ev("2"));
    }

    #[test]
    fn triangle_witness_points_at_violation() {
        let raw = mat(&[&["0", "1", "5"], &["inf", "0", "1"], &["inf", "inf", "0"]]);
        assert_eq!(raw.triangle_witness(), Some((0, 1, 2)));
    }

    fn arb_entry() -> impl Strategy<Value = ExtVal> {
        prop_oneof![
            4 => (0i64..=8, 1i64..=4).prop_map(|(n, d)| ExtVal::rat(n, d)),
            1 => Just(ExtVal::INF),
        ]
    }

    fn arb_grel(n: usize) -> impl Strategy<Value = GRel> {
        proptest::collection::vec(arb_entry(), n * n)
            .prop_map(move |vs| GRel::from_fn(n, n, |x, y| vs[x * n + y]))
    }

    proptest! {
        #[test]
        fn compose_associates(a in arb_grel(3), b in arb_grel(3), c in arb_grel(3)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn compose_monotone(a in arb_grel(3), a2 in arb_grel(3), b in arb_grel(3)) {
            let lo = a.meet(&a2);
            prop_assert!(lo.compose(&b).leq(&a.compose(&b)));
            prop_assert!(b.compose(&lo).leq(&b.compose(&a)));
        }

        #[test]
        fn transpose_involution(a in arb_grel(3)) {
            prop_assert_eq!(a.op().op(), a);
        }

        #[test]
        fn sym_is_idempotent_upper_bound(a in arb_grel(3)) {
            let s = a.sym();
            prop_assert!(a.leq(&s));
            prop_assert_eq!(s.sym(), s);
        }

        #[test]
        fn uniform_preorder_reflexive_transitive(a in arb_grel(3), b in arb_grel(3), c in arb_grel(3)) {
            prop_assert!(a.uniform_leq(&a));
            if a.uniform_leq(&b) && b.uniform_leq(&c) {
                prop_assert!(a.uniform_leq(&c));
            }
        }

        #[test]
        fn pointwise_leq_implies_uniform(a in arb_grel(3), b in arb_grel(3)) {
            if a.leq(&b) {
                prop_assert!(a.uniform_leq(&b));
            }
        }

        #[test]
        fn closure_is_idempotent(a in arb_grel(4)) {
            let c = a.transitive_closure();
            prop_assert!(c.is_distance());
            prop_assert!(c.leq(&a));
            prop_assert_eq!(c.transitive_closure(), c);
        }

        /// The truncated exponent composition stabilizes to the closed form:
        /// equality on entries where the closed form is finite, and escape past
        /// every finite entry of `a` where the closed form is infinite.
        #[test]
        fn phi_truncation_stabilizes(a in arb_grel(3), b in arb_grel(3)) {
            let closed = a.phi_compose(&b);
            let bound = phi_stabilization_bound(&a, &b);
            let t = phi_compose_truncated(&a, &b, bound);
            prop_assert!(t.leq(&closed));
            let max_fin = ExtVal::sup_of(a.entries().filter(|v| v.is_finite()));
            for x in 0..3 {
                for y in 0..3 {
                    match closed.get(x, y) {
                        v if v.is_finite() => prop_assert_eq!(t.get(x, y), v),
                        _ => prop_assert!(t.get(x, y) > max_fin || t.get(x, y).is_infinite()),
                    }
                }
            }
        }

        /// Sampled modulus values certify the uniform preorder decision.
        #[test]
        fn modulus_certifies_uniform_leq(a in arb_grel(3), b in arb_grel(3)) {
            let m = a.modulus(&b);
            let at_zero = m.iter().find(|(r, _)| r.is_zero()).map(|(_, s)| *s);
            match at_zero {
                Some(s) => prop_assert_eq!(s.is_zero(), a.uniform_leq(&b)),
                // No zero entry in b: the preorder holds vacuously.
                None => prop_assert!(a.uniform_leq(&b)),
            }
        }
    }
}
