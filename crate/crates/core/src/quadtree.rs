//! Dynamic quadtree over a root square, with the polygon-to-square assignment.
//!
//! Each split records which polygon triggered it, so the set of non-terminal
//! nodes stays in one-to-one correspondence with the polygons visited so far.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::geom::{Point2, Quadrant, Square};
use crate::scalar::Scalar;

/// Hard cap on node depth; deeper splits mean degenerate input.
pub const MAX_DEPTH: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolygonId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadtreeError {
    #[error("node {0:?} is already split")]
    AlreadySplit(NodeId),
    #[error("polygon {0:?} is already assigned to a square")]
    AlreadyAssigned(PolygonId),
    #[error("point ({x}, {y}) is outside the root square")]
    OutsideRoot { x: f64, y: f64 },
    #[error("split would exceed the maximum depth {MAX_DEPTH}")]
    DepthExceeded,
}

#[derive(Clone, Debug)]
pub struct QuadNode<S> {
    pub square: Square<S>,
    pub depth: u32,
    children: Option<[NodeId; 4]>,
    assigned: Option<PolygonId>,
}

impl<S: Scalar> QuadNode<S> {
    pub fn is_terminal(&self) -> bool {
        self.children.is_none()
    }

    pub fn children(&self) -> Option<[NodeId; 4]> {
        self.children
    }

    pub fn assigned(&self) -> Option<PolygonId> {
        self.assigned
    }
}

/// Flat node record used in reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadNodeRecord {
    pub depth: u32,
    pub origin: [f64; 2],
    pub side: f64,
    pub assigned: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Quadtree<S> {
    nodes: Vec<QuadNode<S>>,
    owner: HashMap<PolygonId, NodeId>,
    version: u64,
}

impl<S: Scalar> Quadtree<S> {
    pub fn new(root: Square<S>) -> Self {
        Self {
            nodes: vec![QuadNode { square: root, depth: 0, children: None, assigned: None }],
            owner: HashMap::new(),
            version: 0,
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn root_square(&self) -> Square<S> {
        self.nodes[0].square
    }

    pub fn node(&self, id: NodeId) -> &QuadNode<S> {
        &self.nodes[id.0]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &QuadNode<S>)> {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i), n))
    }

    /// Bumped on every split; lets callers cache terminal lookups.
    pub fn version(&self) -> u64 {
        self.version
    }

    /// Splits terminal `node` into four children and assigns `polygon` to it.
    pub fn split(&mut self, node: NodeId, polygon: PolygonId) -> Result<[NodeId; 4], QuadtreeError> {
        let n = &self.nodes[node.0];
        if !n.is_terminal() {
            return Err(QuadtreeError::AlreadySplit(node));
        }
        if self.owner.contains_key(&polygon) {
            return Err(QuadtreeError::AlreadyAssigned(polygon));
        }
        if n.depth + 1 > MAX_DEPTH {
            return Err(QuadtreeError::DepthExceeded);
        }
        let (square, depth) = (n.square, n.depth);
        let base = self.nodes.len();
        let ids = [NodeId(base), NodeId(base + 1), NodeId(base + 2), NodeId(base + 3)];
        for q in Quadrant::ALL {
            self.nodes.push(QuadNode { square: square.child(q), depth: depth + 1, children: None, assigned: None });
        }
        let n = &mut self.nodes[node.0];
        n.children = Some(ids);
        n.assigned = Some(polygon);
        self.owner.insert(polygon, node);
        self.version += 1;
        Ok(ids)
    }

    /// The terminal node whose half-open square contains `p`.
    pub fn terminal_containing(&self, p: Point2<S>) -> Result<NodeId, QuadtreeError> {
        if !self.nodes[0].square.contains(p) {
            return Err(QuadtreeError::OutsideRoot { x: p.x.to_f64_lossy(), y: p.y.to_f64_lossy() });
        }
        Ok(self.descend(p))
    }

    /// Like [`Self::terminal_containing`] but also accepts points on the root's
    /// excluded West and North edges, resolving them to the adjacent terminal.
    pub fn terminal_at(&self, p: Point2<S>) -> Result<NodeId, QuadtreeError> {
        if !self.nodes[0].square.contains_closed(p, S::geom_eps()) {
            return Err(QuadtreeError::OutsideRoot { x: p.x.to_f64_lossy(), y: p.y.to_f64_lossy() });
        }
        Ok(self.descend(p))
    }

    fn descend(&self, p: Point2<S>) -> NodeId {
        let mut id = NodeId(0);
        while let Some(ch) = self.nodes[id.0].children {
            id = ch[self.nodes[id.0].square.quadrant_of(p) as usize];
        }
        id
    }

    /// The square assigned to `polygon`, if any.
    pub fn assigned_node(&self, polygon: PolygonId) -> Option<NodeId> {
        self.owner.get(&polygon).copied()
    }

    pub fn non_terminal_count(&self) -> usize {
        self.nodes.iter().filter(|n| !n.is_terminal()).count()
    }

    pub fn terminal_count(&self) -> usize {
        self.nodes.len() - self.non_terminal_count()
    }

    /// Sum of the diameters of all non-terminal squares.
    pub fn diameter_sum(&self) -> S {
        self.nodes.iter().filter(|n| !n.is_terminal()).fold(S::zero(), |acc, n| acc + n.square.diameter())
    }

    /// Checks that assigned polygons and non-terminal nodes correspond one to one.
    pub fn assignment_is_bijective(&self) -> bool {
        let non_terminal = self.non_terminal_count();
        non_terminal == self.owner.len()
            && self.owner.iter().all(|(pid, nid)| {
                let n = &self.nodes[nid.0];
                !n.is_terminal() && n.assigned == Some(*pid)
            })
            && self.nodes.iter().all(|n| n.is_terminal() == n.assigned.is_none())
    }

    pub fn records(&self) -> Vec<QuadNodeRecord> {
        self.nodes
            .iter()
            .map(|n| QuadNodeRecord {
                depth: n.depth,
                origin: [n.square.origin.x.to_f64_lossy(), n.square.origin.y.to_f64_lossy()],
                side: n.square.side.to_f64_lossy(),
                assigned: n.assigned.map(|p| p.0),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type P = Point2<f64>;

    fn unit() -> Quadtree<f64> {
        Quadtree::new(Square::new(P::new(0.0, 0.0), 1.0))
    }

    #[test]
    fn split_assigns_root() {
        let mut qt = unit();
        let ch = qt.split(qt.root(), PolygonId(0)).unwrap();
        for c in ch {
            assert!(qt.node(c).is_terminal());
            assert_eq!(qt.node(c).square.side, 0.5);
        }
        assert_eq!(qt.assigned_node(PolygonId(0)), Some(qt.root()));
        assert_eq!(qt.node(ch[0]).square.origin, P::new(0.0, 0.0));
        assert_eq!(qt.node(ch[1]).square.origin, P::new(0.5, 0.0));
        assert_eq!(qt.node(ch[2]).square.origin, P::new(0.0, 0.5));
        assert_eq!(qt.node(ch[3]).square.origin, P::new(0.5, 0.5));
    }

    #[test]
    fn split_errors() {
        let mut qt = unit();
        let ch = qt.split(qt.root(), PolygonId(0)).unwrap();
        assert_eq!(qt.split(qt.root(), PolygonId(1)), Err(QuadtreeError::AlreadySplit(NodeId(0))));
        assert_eq!(qt.split(ch[0], PolygonId(0)), Err(QuadtreeError::AlreadyAssigned(PolygonId(0))));
    }

    #[test]
    fn depth_cap() {
        let mut qt = unit();
        let mut node = qt.root();
        for i in 0..MAX_DEPTH as usize {
            node = qt.split(node, PolygonId(i)).unwrap()[0];
        }
        assert_eq!(qt.split(node, PolygonId(999)), Err(QuadtreeError::DepthExceeded));
    }

    #[test]
    fn non_terminal_count_tracks_splits() {
        let mut qt = unit();
        let ch = qt.split(qt.root(), PolygonId(0)).unwrap();
        qt.split(ch[1], PolygonId(1)).unwrap();
        qt.split(ch[3], PolygonId(2)).unwrap();
        assert_eq!(qt.non_terminal_count(), 3);
        assert!(qt.assignment_is_bijective());
    }

    #[test]
    fn terminal_lookup_examples() {
        let mut qt = unit();
        assert_eq!(qt.terminal_containing(P::new(0.3, 0.3)).unwrap(), qt.root());
        let ch = qt.split(qt.root(), PolygonId(0)).unwrap();
        assert_eq!(qt.terminal_containing(P::new(0.25, 0.25)).unwrap(), ch[0]);
        // on the vertical axis: belongs to the western child's East edge
        assert_eq!(qt.terminal_containing(P::new(0.5, 0.25)).unwrap(), ch[0]);
        assert!(qt.terminal_containing(P::new(0.0, 0.25)).is_err());
        assert_eq!(qt.terminal_at(P::new(0.0, 0.25)).unwrap(), ch[0]);
        assert!(qt.terminal_at(P::new(1.5, 0.25)).is_err());
    }

    #[test]
    fn diameter_sum_examples() {
        let mut qt = unit();
        let d = std::f64::consts::SQRT_2;
        let ch = qt.split(qt.root(), PolygonId(0)).unwrap();
        assert!((qt.diameter_sum() - d).abs() < 1e-12);
        for (i, c) in ch.into_iter().enumerate() {
            qt.split(c, PolygonId(i + 1)).unwrap();
        }
        // oracle: D + 4 * D / 2
        let oracle = d + 4.0 * (d / 2.0);
        assert!((qt.diameter_sum() - oracle).abs() < 1e-12);
        assert!((qt.diameter_sum() - 3.0 * d).abs() < 1e-12);
        assert!(qt.diameter_sum() <= 2.0 * d * 5f64.sqrt());
    }

    fn random_tree(choices: &[(u16, bool)], max_depth: u32) -> Quadtree<f64> {
        let mut qt = unit();
        qt.split(qt.root(), PolygonId(0)).unwrap();
        let mut next = 1;
        for &(pick, _) in choices {
            let terminals: Vec<NodeId> =
                qt.nodes().filter(|(_, n)| n.is_terminal() && n.depth < max_depth).map(|(id, _)| id).collect();
            if terminals.is_empty() {
                break;
            }
            let id = terminals[pick as usize % terminals.len()];
            qt.split(id, PolygonId(next)).unwrap();
            next += 1;
        }
        qt
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn sigma_bound_holds(choices in proptest::collection::vec((any::<u16>(), any::<bool>()), 0..80)) {
            let qt = random_tree(&choices, 6);
            let x = qt.non_terminal_count() as f64;
            let d = qt.root_square().diameter();
            prop_assert!(qt.diameter_sum() <= 2.0 * d * x.sqrt() + 1e-12);
            prop_assert!(qt.assignment_is_bijective());
        }

        #[test]
        fn terminals_partition_root(choices in proptest::collection::vec((any::<u16>(), any::<bool>()), 0..40),
                                    pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 100)) {
            let qt = random_tree(&choices, 6);
            for (x, y) in pts {
                let p = P::new(x, y);
                if !qt.root_square().contains(p) {
                    continue;
                }
                let owners: Vec<_> = qt.nodes().filter(|(_, n)| n.is_terminal() && n.square.contains(p)).collect();
                prop_assert_eq!(owners.len(), 1);
                prop_assert_eq!(owners[0].0, qt.terminal_containing(p).unwrap());
            }
        }
    }
}
