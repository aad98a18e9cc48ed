//! Finite homogeneous trees with the counting measure, the order `⊴`, and the
//! initial-segment rearrangement.
//!
//! Vertices are numbered breadth first, children left to right. A vertex is
//! also named by its path: the string of child indices from the root (`""` is
//! the root, `"10"` the left child of the root's second child).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measure::IndexSet;

/// Largest number of vertices accepted.
pub const MAX_VERTICES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousTree {
    q: usize,
    d: usize,
    offsets: Vec<usize>,
}

impl HomogeneousTree {
    /// Tree of branching `q` (2..=10) truncated at depth `d`.
    pub fn new(q: usize, d: usize) -> Result<Self> {
        if !(2..=10).contains(&q) {
            return invalid(format!("branching {q} is outside 2..=10"));
        }
        let mut offsets = vec![0usize];
        let mut width = 1usize;
        for _ in 0..=d {
            let next = offsets.last().unwrap() + width;
            if next > MAX_VERTICES {
                return Err(Error::SizeLimit {
                    what: "tree vertices",
                    actual: next,
                    limit: MAX_VERTICES,
                });
            }
            offsets.push(next);
            width *= q;
        }
        Ok(HomogeneousTree { q, d, offsets })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets[self.d + 1]
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn depth(&self, v: usize) -> usize {
        self.offsets.partition_point(|&o| o <= v) - 1
    }

    /// Position of `v` among the vertices of its depth, left to right.
    fn rank_in_level(&self, v: usize) -> usize {
        v - self.offsets[self.depth(v)]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let k = self.depth(v);
        (k > 0).then(|| self.offsets[k - 1] + self.rank_in_level(v) / self.q)
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        let k = self.depth(v);
        if k == self.d {
            return Vec::new();
        }
        let first = self.offsets[k + 1] + self.rank_in_level(v) * self.q;
        (first..first + self.q).collect()
    }

    /// Geodesic from the root to `v`, inclusive.
    pub fn geodesic(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut x = v;
        while let Some(p) = self.parent(x) {
            path.push(p);
            x = p;
        }
        path.reverse();
        path
    }

    pub fn path(&self, v: usize) -> String {
        let k = self.depth(v);
        let r = self.rank_in_level(v);
        (0..k)
            .rev()
            .map(|i| char::from_digit(((r / self.q.pow(i as u32)) % self.q) as u32, 10).unwrap())
            .collect()
    }

    pub fn from_path(&self, path: &str) -> Result<usize> {
        if path.len() > self.d {
            return invalid(format!("path {path:?} is deeper than {}", self.d));
        }
        let mut r = 0;
        for c in path.chars() {
            match c.to_digit(10) {
                Some(i) if (i as usize) < self.q => r = r * self.q + i as usize,
                _ => return invalid(format!("path {path:?} has an invalid child index {c:?}")),
            }
        }
        Ok(self.offsets[path.len()] + r)
    }

    /// Leaf rays through `v`, as an inclusive range of leaf positions in
    /// lexicographic order.
    pub fn ray_interval(&self, v: usize) -> (usize, usize) {
        let span = self.q.pow((self.d - self.depth(v)) as u32);
        let lo = self.rank_in_level(v) * span;
        (lo, lo + span - 1)
    }

    pub fn is_ancestor_or_equal(&self, x: usize, y: usize) -> bool {
        let (dx, dy) = (self.depth(x), self.depth(y));
        dx <= dy && self.rank_in_level(y) / self.q.pow((dy - dx) as u32) == self.rank_in_level(x)
    }

    /// `x ⊴ y`: `x` is an ancestor of `y` (or `y` itself), or every ray
    /// through `y` precedes every ray through `x`.
    pub fn order_leq(&self, x: usize, y: usize) -> bool {
        self.is_ancestor_or_equal(x, y) || self.ray_interval(y).1 < self.ray_interval(x).0
    }

    /// The vertices sorted by `⊴`. The relation is a total order (preorder
    /// traversal visiting children right to left), so this is its only linear
    /// extension.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.vertex_count()).collect();
        v.sort_by(|&x, &y| {
            if x == y {
                Ordering::Equal
            } else if self.order_leq(x, y) {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        });
        v
    }

    /// `A*`: the first `|A|` vertices of the canonical order.
    pub fn rearrange(&self, a: &IndexSet) -> Result<IndexSet> {
        if a.size() != self.vertex_count() {
            return invalid("vertex set has the wrong size");
        }
        IndexSet::from_members(a.size(), self.canonical_order().into_iter().take(a.len()))
    }
}

/// A weight on the vertices of a tree.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeWeight {
    pub tree: HomogeneousTree,
    pub values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TreeWeightRepr {
    q: usize,
    d: usize,
    values: BTreeMap<String, f64>,
}

impl TreeWeight {
    pub fn new(tree: HomogeneousTree, values: Vec<f64>) -> Result<Self> {
        if values.len() != tree.vertex_count() {
            return invalid(format!("expected {} vertex values, got {}", tree.vertex_count(), values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return invalid("vertex values must be finite");
        }
        Ok(TreeWeight { tree, values })
    }

    /// Parses `{"q": .., "d": .., "values": {path: value}}`; every vertex must
    /// be listed.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: TreeWeightRepr =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("tree weights: {e}")))?;
        let tree = HomogeneousTree::new(repr.q, repr.d)?;
        let mut values = vec![f64::NAN; tree.vertex_count()];
        for (path, v) in &repr.values {
            values[tree.from_path(path)?] = *v;
        }
        if let Some(missing) = values.iter().position(|v| v.is_nan()) {
            return invalid(format!("no value for vertex {:?}", tree.path(missing)));
        }
        Self::new(tree, values)
    }

    pub fn to_json(&self) -> String {
        let repr = TreeWeightRepr {
            q: self.tree.q,
            d: self.tree.d,
            values: (0..self.values.len()).map(|v| (self.tree.path(v), self.values[v])).collect(),
        };
        serde_json::to_string(&repr).expect("serializable")
    }

    fn mass(&self, set: impl IntoIterator<Item = usize>) -> f64 {
        set.into_iter().map(|v| self.values[v]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderViolation {
    pub x: String,
    pub y: String,
    pub value_x: f64,
    pub value_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearReport {
    pub holds: bool,
    pub violation: Option<OrderViolation>,
}

/// Whether `v(x) >= v(y)` whenever `x ⊴ y`, by scanning every ordered pair;
/// the first violation in canonical order is reported.
pub fn linearly_decreasing_check(w: &TreeWeight) -> LinearReport {
    let t = &w.tree;
    let order = t.canonical_order();
    for (i, &x) in order.iter().enumerate() {
        for &y in &order[i + 1..] {
            if t.order_leq(x, y) && w.values[x] < w.values[y] {
                return LinearReport {
                    holds: false,
                    violation: Some(OrderViolation {
                        x: t.path(x),
                        y: t.path(y),
                        value_x: w.values[x],
                        value_y: w.values[y],
                    }),
                };
            }
        }
    }
    LinearReport { holds: true, violation: None }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackWitness {
    pub x: String,
    pub y: String,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CcLinearReport {
    pub q: usize,
    pub d: usize,
    /// Concavity on the family `A = [o, x]`, `B = [1, y] ∪ [1, x]` over all
    /// pairs `x ⊴ y`, `x != y`.
    pub concavity_holds: bool,
    pub worst: Option<SlackWitness>,
    pub linearly_decreasing: LinearReport,
    /// Every rearranged family member had the expected initial-segment form.
    pub identities_reproduced: bool,
    /// Concavity on the family implies linear decrease.
    pub consistent: bool,
}

/// Runs the concavity family against the linear-decrease check.
///
/// Intervals are read along the canonical order `c_0 = o, c_1, ...`:
/// `[u, w]` is the run of vertices from `u` to `w`, and `1 = c_1`.
pub fn cc_linear_suite(w: &TreeWeight) -> Result<CcLinearReport> {
    let t = &w.tree;
    let n = t.vertex_count();
    let order = t.canonical_order();
    let seg = |lo: usize, hi_excl: usize| -> IndexSet {
        IndexSet::from_members(n, order[lo.min(hi_excl)..hi_excl].iter().copied()).expect("in range")
    };
    let mut holds = true;
    let mut worst: Option<SlackWitness> = None;
    let mut reproduced = true;
    for px in 0..n {
        for py in px + 1..n {
            let a = seg(0, px + 1);
            let b = seg(1, py + 1).union(&seg(1, px + 1));
            let union = a.union(&b);
            let inter = a.intersection(&b);
            let (ra, rb, ru, ri) = (t.rearrange(&a)?, t.rearrange(&b)?, t.rearrange(&union)?, t.rearrange(&inter)?);
            reproduced &= ra == a && rb == seg(0, py) && ru == seg(0, py + 1) && ri == seg(0, px);
            let slack = w.mass(ra.members()) + w.mass(rb.members()) - w.mass(ru.members()) - w.mass(ri.members());
            let tol = 1e-12 * w.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            if slack < -tol {
                holds = false;
            }
            if worst.as_ref().map_or(true, |wst| slack < wst.slack) {
                worst = Some(SlackWitness {
                    x: t.path(order[px]),
                    y: t.path(order[py]),
                    slack,
                });
            }
        }
    }
    let linear = linearly_decreasing_check(w);
    Ok(CcLinearReport {
        q: t.q,
        d: t.d,
        concavity_holds: holds,
        worst,
        consistent: !holds || linear.holds,
        linearly_decreasing: linear,
        identities_reproduced: reproduced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t22() -> HomogeneousTree {
        HomogeneousTree::new(2, 2).unwrap()
    }

    #[test]
    fn structure() {
        let t = t22();
        assert_eq!(t.vertex_count(), 7);
        assert_eq!(t.children(0), vec![1, 2]);
        assert_eq!(t.children(2), vec![5, 6]);
        assert_eq!(t.parent(6), Some(2));
        assert_eq!(t.path(5), "10");
        assert_eq!(t.from_path("10").unwrap(), 5);
        assert_eq!(t.ray_interval(2), (2, 3));
        assert_eq!(t.ray_interval(0), (0, 3));
        assert_eq!(t.geodesic(4), vec![0, 1, 4]);
    }

    #[test]
    fn order_examples() {
        let t = t22();
        for y in 0..7 {
            assert!(t.order_leq(0, y));
        }
        // rightmost child of the root precedes the leftmost grandchild
        assert!(t.order_leq(2, 3));
        // sibling leaves: the right one comes first
        assert!(t.order_leq(4, 3));
        assert!(!t.order_leq(3, 4));
    }

    #[test]
    fn canonical_order_is_right_to_left_preorder() {
        assert_eq!(t22().canonical_order(), vec![0, 2, 6, 5, 1, 4, 3]);
    }

    #[test]
    fn rearrange_examples() {
        let t = t22();
        let root = IndexSet::from_members(7, [0]).unwrap();
        assert_eq!(t.rearrange(&root).unwrap(), root);
        let branch = IndexSet::from_members(7, t.geodesic(6)).unwrap();
        assert_eq!(t.rearrange(&branch).unwrap(), branch);
        assert_eq!(t.rearrange(&IndexSet::full(7)).unwrap(), IndexSet::full(7));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"q":2,"d":1,"values":{"":3,"0":1,"1":2}}"#;
        let w = TreeWeight::from_json(text).unwrap();
        assert_eq!(w.values, vec![3.0, 1.0, 2.0]);
        assert_eq!(TreeWeight::from_json(&w.to_json()).unwrap(), w);
        assert!(TreeWeight::from_json(r#"{"q":2,"d":1,"values":{"":3,"0":1}}"#).is_err());
        assert!(TreeWeight::from_json(r#"{"q":2,"d":1,"values":{"":3,"0":1,"1":2,"2":0}}"#).is_err());
    }

    #[test]
    fn linear_checks() {
        let t = t22();
        let order = t.canonical_order();
        let mut vals = vec![0.0; 7];
        for (i, &v) in order.iter().enumerate() {
            vals[v] = (7 - i) as f64;
        }
        let w = TreeWeight::new(t.clone(), vals.clone()).unwrap();
        let r = cc_linear_suite(&w).unwrap();
        assert!(r.concavity_holds && r.linearly_decreasing.holds && r.identities_reproduced);
        let mut leafy = vec![1.0; 7];
        leafy[3] = 5.0;
        let r = linearly_decreasing_check(&TreeWeight::new(t, leafy).unwrap());
        assert!(!r.holds);
        assert_eq!(r.violation.unwrap().x, "");
    }
}
