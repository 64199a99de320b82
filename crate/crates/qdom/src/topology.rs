//! Finite topologies generated from ball/hole subbases of a distance space.
//!
//! On a finite carrier every generated topology is determined by the minimal
//! open set around each point (the intersection of all subbasic sets
//! containing it); the open family is then all unions of minimal opens. Only
//! the entry values and midpoints between consecutive entries matter as ball
//! and hole thresholds, which keeps the subbasis finite.

use std::fmt::Write as _;

use crate::extval::ExtVal;
use crate::space::{all_subsets, mask_of, members, DistanceSpace, SpaceError, Subset};

/// The derived topologies of a distance space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum TopKind {
    /// Alexandroff ball topology: generated by `{x : d(c,x) < r}`.
    Ball,
    /// Lower topology: generated by the holes `{x : d(c,x) > r}`.
    Lower,
    /// Smyth topology: join of ball and lower.
    Smyth,
    /// Upper topology: generated by the holes `{x : d(x,c) > r}`.
    Upper,
    /// Yoneda topology: join of upper and lower.
    Yoneda,
    /// Symmetric ball topology: balls of `d` and of its opposite.
    SymmetricBall,
}

impl TopKind {
    pub const ALL: [TopKind; 6] = [
        TopKind::Ball,
        TopKind::Lower,
        TopKind::Smyth,
        TopKind::Upper,
        TopKind::Yoneda,
        TopKind::SymmetricBall,
    ];
}

/// A topology on a finite carrier, stored as the full open family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    n: usize,
    kind: Option<TopKind>,
    /// Minimal open around each point.
    min_open: Vec<Subset>,
    /// All opens, sorted; always contains the empty set and the carrier.
    opens: Vec<Subset>,
}

impl FiniteTopology {
    /// Generates the topology of the given kind with thresholds drawn from
    /// the entry-value grid.
    pub fn generate(space: &DistanceSpace, kind: TopKind) -> Result<FiniteTopology, SpaceError> {
        space.check_size()?;
        let grid = space.value_grid();
        let mut t = FiniteTopology::from_subbasis(space.n(), subbasis(space, kind, &grid));
        t.kind = Some(kind);
        Ok(t)
    }

    /// Builds a topology from an explicit subbasis via minimal opens.
    pub fn from_subbasis(n: usize, subbasis: Vec<Subset>) -> FiniteTopology {
        assert!(n <= crate::space::MAX_POINTS);
        let full = (1u32 << n) - 1;
        let min_open: Vec<Subset> = (0..n)
            .map(|x| {
                subbasis
                    .iter()
                    .filter(|s| *s & (1 << x) != 0)
                    .fold(full, |acc, s| acc & s)
            })
            .collect();
        let mut opens: Vec<Subset> = all_subsets(n)
            .map(|a| members(a).fold(0u32, |acc, x| acc | min_open[x]))
            .collect();
        opens.sort_unstable();
        opens.dedup();
        FiniteTopology {
            n,
            kind: None,
            min_open,
            opens,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Option<TopKind> {
        self.kind
    }

    /// All open sets, ascending as bitmasks.
    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    /// The minimal open neighbourhood of a point.
    pub fn minimal_open(&self, x: usize) -> Subset {
        self.min_open[x]
    }

    pub fn is_open(&self, s: Subset) -> bool {
        members(s).fold(0u32, |acc, x| acc | self.min_open[x]) == s
    }

    /// Largest open inside `s`.
    pub fn interior(&self, s: Subset) -> Subset {
        members(s)
            .filter(|&x| self.min_open[x] & !s == 0)
            .fold(0u32, |acc, x| acc | self.min_open[x])
    }

    /// Smallest closed superset of `s`.
    pub fn closure(&self, s: Subset) -> Subset {
        let full = (1u32 << self.n) - 1;
        full & !self.interior(full & !s)
    }

    /// `b` meets every nonempty open (equivalently every minimal open).
    pub fn is_dense(&self, b: Subset) -> bool {
        (0..self.n).all(|x| self.min_open[x] & b != 0)
    }

    /// Coarsest topology refining both operands, generated by the union of
    /// their open families. The result carries no distance kind tag.
    pub fn join(&self, other: &FiniteTopology) -> FiniteTopology {
        assert_eq!(self.n, other.n, "topologies must share a carrier");
        let mut sets = self.opens.clone();
        sets.extend_from_slice(&other.opens);
        FiniteTopology::from_subbasis(self.n, sets)
    }

    /// Specialization preorder: `x` below `y` iff every open containing `x`
    /// contains `y` (i.e. `x` lies in the closure of `{y}`).
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.min_open[x] & (1 << y) != 0
    }

    /// Eventual membership of an ultimately periodic sequence in every open
    /// neighbourhood of `x`: all recurrent values lie in the minimal open.
    pub fn converges_to(&self, recurrent: &[usize], x: usize) -> bool {
        let rec_mask = mask_of(recurrent.iter().copied());
        rec_mask & !self.min_open[x] == 0
    }

    /// DOT digraph of the specialization preorder, transitively reduced.
    /// Mutually specializing points keep both arcs.
    pub fn specialization_dot(&self, labels: &[String]) -> String {
        let n = self.n;
        let edge = |x: usize, y: usize| x != y && self.specializes(x, y);
        let mut out = String::from("digraph specialization {\n  rankdir=BT;\n");
        for l in labels {
            let _ = writeln!(out, "  {:?};", l);
        }
        for x in 0..n {
            for y in 0..n {
                if !edge(x, y) {
                    continue;
                }
                // Drop arcs implied by transitivity through a third point,
                // unless x and y specialize each other (a 2-cycle).
                let implied = !edge(y, x)
                    && (0..n).any(|z| z != x && z != y && edge(x, z) && edge(z, y) && !edge(z, x));
                if !implied {
                    let _ = writeln!(out, "  {:?} -> {:?};", labels[x], labels[y]);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The subbasic open sets of a kind over a threshold grid.
fn subbasis(space: &DistanceSpace, kind: TopKind, grid: &[ExtVal]) -> Vec<Subset> {
    let n = space.n();
    let mut sets = Vec::new();
    let mut add = |f: &dyn Fn(usize) -> bool| {
        sets.push(mask_of((0..n).filter(|&x| f(x))));
    };
    for c in 0..n {
        for &r in grid {
            match kind {
                TopKind::Ball => add(&|x| space.dist(c, x) < r),
                TopKind::Lower => add(&|x| space.dist(c, x) > r),
                TopKind::Smyth => {
                    add(&|x| space.dist(c, x) < r);
                    add(&|x| space.dist(c, x) > r);
                }
                TopKind::Upper => add(&|x| space.dist(x, c) > r),
                TopKind::Yoneda => {
                    add(&|x| space.dist(x, c) > r);
                    add(&|x| space.dist(c, x) > r);
                }
                TopKind::SymmetricBall => {
                    add(&|x| space.dist(c, x) < r);
                    add(&|x| space.dist(x, c) < r);
                }
            }
        }
    }
    sets.sort_unstable();
    sets.dedup();
    sets
}
