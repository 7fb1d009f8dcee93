use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_TOPOLOGY_TERMINALS: usize = 3;
pub const MAX_TOPOLOGY_TERMINALS: usize = 7;

/// A full Steiner topology: terminals `0..n` of degree 1 and Steiner vertices
/// `n..2n-2` of degree 3, joined in a tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Topology {
    terminals: usize,
    edges: Vec<(usize, usize)>,
}

impl Topology {
    /// Checks the degree and tree conditions before accepting `edges`.
    pub fn new(terminals: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let topo = Topology { terminals, edges };
        if topo.is_full() {
            Ok(topo)
        } else {
            Err(Error::InvalidArgument(format!(
                "edges {:?} do not form a full Steiner topology on {terminals} terminals",
                topo.edges
            )))
        }
    }

    pub fn terminals(&self) -> usize {
        self.terminals
    }

    pub fn steiner_count(&self) -> usize {
        self.terminals - 2
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.terminals - 2
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_steiner(&self, v: usize) -> bool {
        v >= self.terminals
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn is_full(&self) -> bool {
        let n = self.terminals;
        if n < 2 || self.edges.len() + 1 != self.vertex_count() {
            return false;
        }
        if self.edges.iter().any(|&(a, b)| a >= self.vertex_count() || b >= self.vertex_count() || a == b) {
            return false;
        }
        let adj = self.adjacency();
        let degrees_ok = adj
            .iter()
            .enumerate()
            .all(|(v, nb)| nb.len() == if v < n { 1 } else { 3 });
        let mut uf = petgraph::unionfind::UnionFind::new(self.vertex_count());
        degrees_ok && self.edges.iter().all(|&(a, b)| uf.union(a, b))
    }
}

/// All full Steiner topologies on `n` labelled terminals, `(2n-5)!!` of them.
///
/// Built by inserting terminals one at a time: terminal `k` subdivides any edge of a
/// topology on terminals `0..k` with a new Steiner vertex.
pub fn enumerate_full_topologies(n: usize) -> Result<Vec<Topology>> {
    if !(MIN_TOPOLOGY_TERMINALS..=MAX_TOPOLOGY_TERMINALS).contains(&n) {
        return Err(Error::TerminalCount {
            got: n,
            min: MIN_TOPOLOGY_TERMINALS,
            max: MAX_TOPOLOGY_TERMINALS,
        });
    }
    let mut out = Vec::new();
    let star = vec![(0, n), (1, n), (2, n)];
    grow(n, 3, star, &mut out);
    Ok(out)
}

fn grow(n: usize, next: usize, edges: Vec<(usize, usize)>, out: &mut Vec<Topology>) {
    if next == n {
        out.push(Topology { terminals: n, edges });
        return;
    }
    let steiner = n + next - 2;
    for e in 0..edges.len() {
        let (u, v) = edges[e];
        let mut split = edges.clone();
        split[e] = (u, steiner);
        split.push((steiner, v));
        split.push((steiner, next));
        grow(n, next + 1, split, out);
    }
}

/// `(2n-5)!!`, the number of full topologies on `n >= 3` terminals.
pub fn full_topology_count(n: usize) -> usize {
    (1..=2 * n - 5).step_by(2).product()
}
