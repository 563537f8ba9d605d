//! Deterministic causality on tree-ordered sets.
//!
//! A [`CausalMap`] `ψ: Ω₁ → Ω₂` acts on observables over `Ω₂` by pullback,
//! `(Φf)(ω) = f(ψ(ω))`. A [`CausalSystem`] attaches a state space to every
//! node of a [`TreeOrderedSet`], a causal map to every edge and optionally an
//! observable to every node; its [`composite observable`] is the single
//! root-level observable combining all node observables.
//!
//! [`composite observable`]: CausalSystem::composite_observable

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::observable::{ClosedFormTag, Kind, Observable};
use crate::space::{State, StateSpace};

pub type StateFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Deterministic causal map between two state spaces.
#[derive(Clone)]
pub struct CausalMap {
    source: StateSpace,
    target: StateSpace,
    map: StateFn,
    label: String,
}

impl fmt::Debug for CausalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CausalMap")
            .field("label", &self.label)
            .field("source", &self.source)
            .field("target", &self.target)
            .finish()
    }
}

impl CausalMap {
    pub fn new(source: &StateSpace, target: &StateSpace, label: impl Into<String>, map: StateFn) -> Self {
        Self { source: source.clone(), target: target.clone(), map, label: label.into() }
    }

    pub fn identity(space: &StateSpace) -> Self {
        Self::new(space, space, "id", Arc::new(|w: &[f64]| w.to_vec()))
    }

    pub fn source(&self) -> &StateSpace {
        &self.source
    }

    pub fn target(&self) -> &StateSpace {
        &self.target
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `ψ(ω)`, validated against the target space.
    pub fn apply(&self, state: &State) -> Result<State> {
        if state.space() != &self.source {
            return Err(Error::SpaceMismatch(format!("map '{}' applied to a state outside its source", self.label)));
        }
        State::new(&self.target, (self.map)(state.coords()))
    }

    /// `next ∘ self`
    pub fn then(&self, next: &CausalMap) -> Result<CausalMap> {
        if self.target != next.source {
            return Err(Error::SpaceMismatch(format!(
                "cannot compose '{}' into '{}': target and source differ",
                self.label, next.label
            )));
        }
        let (f, g) = (self.map.clone(), next.map.clone());
        Ok(CausalMap {
            source: self.source.clone(),
            target: next.target.clone(),
            map: Arc::new(move |w: &[f64]| g(&f(w))),
            label: format!("{}∘{}", next.label, self.label),
        })
    }

    /// Checks that `ψ(ω)` lies in the target for `count` random source states.
    pub fn spot_check(&self, seed: u64, count: usize) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..count {
            let w = self.source.random_state(&mut rng);
            self.apply(&w)?;
        }
        Ok(())
    }
}

/// Pulls `obs` (defined on `map.target`) back to `map.source`:
/// `[F'(Ξ)](ω) = [F(Ξ)](ψ(ω))`.
pub fn pullback(map: &CausalMap, obs: &Observable) -> Result<Observable> {
    if obs.state_space() != map.target() {
        return Err(Error::SpaceMismatch(format!(
            "observable lives on {:?}, map '{}' targets {:?}",
            obs.state_space(),
            map.label(),
            map.target()
        )));
    }
    Ok(Observable::from_kind(obs.value_dim(), map.source().clone(), ClosedFormTag::Pullback, Kind::Pullback {
        map: map.clone(),
        inner: obs.clone(),
    }))
}

/// Finite rooted tree given by a parent map `τ: T∖{t₀} → T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeOrderedSet {
    parent: Vec<Option<usize>>,
    root: usize,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl TreeOrderedSet {
    /// `parent[t]` is `τ(t)`; exactly one node (the root) has no parent.
    pub fn new(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        let roots: Vec<usize> = (0..n).filter(|&t| parent[t].is_none()).collect();
        let root = match roots.as_slice() {
            [r] => *r,
            [] => return Err(Error::Tree("no root".into())),
            _ => return Err(Error::Tree(format!("multiple roots: {roots:?}"))),
        };
        let mut children = vec![Vec::new(); n];
        for (t, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::Tree(format!("parent of node {t} is {p}, out of range")));
                }
                children[p].push(t);
            }
        }
        // depth via walking up; a walk longer than n nodes means a cycle
        let mut depth = vec![0; n];
        for t in 0..n {
            let (mut cur, mut d) = (t, 0);
            while let Some(p) = parent[cur] {
                d += 1;
                if d > n {
                    return Err(Error::Tree(format!("parent map has a cycle through node {t}")));
                }
                cur = p;
            }
            depth[t] = d;
        }
        Ok(Self { parent, root, children, depth })
    }

    /// The parallel tree `{0, 1, …, n}` with `τ(i) = 0`.
    pub fn parallel(leaves: usize) -> Self {
        let mut parent = vec![Some(0); leaves + 1];
        parent[0] = None;
        Self::new(parent).expect("star tree is valid")
    }

    /// A chain `0 → 1 → … → len-1`.
    pub fn chain(len: usize) -> Result<Self> {
        Self::new((0..len).map(|t| t.checked_sub(1)).collect())
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, t: usize) -> Option<usize> {
        self.parent.get(t).copied().flatten()
    }

    /// Children in ascending index order.
    pub fn children(&self, t: usize) -> &[usize] {
        &self.children[t]
    }

    /// `s ≤ t` in the tree order, i.e. `s` is an ancestor of (or equal to) `t`.
    pub fn precedes(&self, s: usize, t: usize) -> bool {
        if s >= self.len() || t >= self.len() || self.depth[s] > self.depth[t] {
            return false;
        }
        let mut cur = t;
        for _ in 0..(self.depth[t] - self.depth[s]) {
            cur = self.parent[cur].expect("depth bookkeeping");
        }
        cur == s
    }

    /// Nodes on the path from `from` down to `to`, both included.
    pub fn path(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        if !self.precedes(from, to) {
            return Err(Error::Path { from, to });
        }
        let mut nodes = vec![to];
        let mut cur = to;
        while cur != from {
            cur = self.parent[cur].expect("ancestor reached before root");
            nodes.push(cur);
        }
        nodes.reverse();
        Ok(nodes)
    }

    /// Depth-first preorder from the root, children in ascending index order.
    pub fn depth_first(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(self.children[t].iter().rev());
        }
        out
    }
}

/// State spaces on the nodes of a tree, causal maps on its edges and
/// observables on (some of) its nodes.
#[derive(Debug, Clone)]
pub struct CausalSystem {
    tree: TreeOrderedSet,
    spaces: Vec<StateSpace>,
    edges: Vec<Option<CausalMap>>,
    observables: Vec<Option<Observable>>,
}

impl CausalSystem {
    /// `edges[t]` maps `spaces[parent(t)]` to `spaces[t]` and must be `None`
    /// exactly at the root.
    pub fn new(
        tree: TreeOrderedSet,
        spaces: Vec<StateSpace>,
        edges: Vec<Option<CausalMap>>,
        observables: Vec<Option<Observable>>,
    ) -> Result<Self> {
        let n = tree.len();
        for (what, len) in [("spaces", spaces.len()), ("edges", edges.len()), ("observables", observables.len())] {
            if len != n {
                return Err(Error::Structure(format!("{what} has {len} entries for {n} nodes")));
            }
        }
        for t in 0..n {
            match (tree.parent(t), &edges[t]) {
                (None, None) => {}
                (None, Some(_)) => return Err(Error::Structure(format!("root {t} must not carry an edge map"))),
                (Some(_), None) => return Err(Error::Structure(format!("node {t} has no edge map"))),
                (Some(p), Some(m)) => {
                    if m.source() != &spaces[p] || m.target() != &spaces[t] {
                        return Err(Error::SpaceMismatch(format!(
                            "edge map '{}' into node {t} does not connect the spaces of nodes {p} and {t}",
                            m.label()
                        )));
                    }
                }
            }
            if let Some(o) = &observables[t] {
                if o.state_space() != &spaces[t] {
                    return Err(Error::SpaceMismatch(format!("observable at node {t} lives on another space")));
                }
            }
        }
        Ok(Self { tree, spaces, edges, observables })
    }

    pub fn tree(&self) -> &TreeOrderedSet {
        &self.tree
    }

    pub fn space_at(&self, t: usize) -> &StateSpace {
        &self.spaces[t]
    }

    pub fn edge_map(&self, t: usize) -> Option<&CausalMap> {
        self.edges.get(t).and_then(Option::as_ref)
    }

    pub fn observable_at(&self, t: usize) -> Option<&Observable> {
        self.observables.get(t).and_then(Option::as_ref)
    }

    /// Composition of the edge maps along the tree path `from → to`.
    pub fn compose_path(&self, from: usize, to: usize) -> Result<CausalMap> {
        let nodes = self.tree.path(from, to)?;
        let mut acc = CausalMap::identity(&self.spaces[from]);
        for &t in &nodes[1..] {
            acc = acc.then(self.edges[t].as_ref().expect("validated edge"))?;
        }
        Ok(acc)
    }

    /// Root-level composite observable: the product, over observable-bearing
    /// nodes in depth-first order, of each node observable pulled back to the
    /// root along its path. With `spot_check` set, every composed path map is
    /// first checked for codomain membership on random root states.
    pub fn composite_observable(&self, spot_check: bool) -> Result<Observable> {
        let root = self.tree.root();
        let mut parts = Vec::new();
        for t in self.tree.depth_first() {
            let Some(obs) = &self.observables[t] else { continue };
            if !self.tree.precedes(root, t) {
                return Err(Error::Structure(format!("observable node {t} is unreachable from the root")));
            }
            if t == root {
                parts.push(obs.clone());
                continue;
            }
            let path = self.compose_path(root, t)?;
            if spot_check {
                path.spot_check(t as u64, 16)?;
            }
            parts.push(pullback(&path, obs)?);
        }
        match parts.len() {
            0 => Err(Error::Structure("no node carries an observable".into())),
            1 if self.observables[root].is_some() => Ok(parts.pop().unwrap()),
            _ => Observable::product_tagged(parts, ClosedFormTag::Composite),
        }
    }
}
