//! Strongly connected components, condensation, and reachability for the
//! transition digraphs of Markov-type measures.

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct SccDecomposition {
    /// Components in Tarjan emission order (reverse topological); vertex
    /// lists ascending.
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Condensation adjacency (no self loops, deduplicated, ascending).
    pub condensation: Vec<Vec<usize>>,
    /// Reflexive-transitive reachability over components.
    pub reachable: Vec<Vec<bool>>,
}

impl SccDecomposition {
    /// Components a and b are comparable when a path connects them in either
    /// direction (distinct components only).
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a != b && (self.reachable[a][b] || self.reachable[b][a])
    }
}

struct Tarjan<'a> {
    adj: &'a [Vec<usize>],
    index: usize,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn connect(&mut self, v: usize) {
        self.idx[v] = Some(self.index);
        self.low[v] = self.index;
        self.index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.adj[v] {
            if self.idx[w].is_none() {
                self.connect(w);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack[w] {
                self.low[v] = self.low[v].min(self.idx[w].unwrap());
            }
        }
        if self.low[v] == self.idx[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.comps.push(comp);
        }
    }
}

pub fn strongly_connected_components(adj: &[Vec<usize>]) -> SccDecomposition {
    let n = adj.len();
    let mut state = Tarjan {
        adj,
        index: 0,
        idx: vec![None; n],
        low: vec![0; n],
        stack: Vec::new(),
        on_stack: vec![false; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if state.idx[v].is_none() {
            state.connect(v);
        }
    }
    let components = state.comps;
    let m = components.len();
    let mut component_of = vec![0; n];
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
        }
    }
    let mut condensation = vec![Vec::new(); m];
    for v in 0..n {
        for &w in &adj[v] {
            let (a, b) = (component_of[v], component_of[w]);
            if a != b {
                condensation[a].push(b);
            }
        }
    }
    for row in &mut condensation {
        row.sort_unstable();
        row.dedup();
    }
    let mut reachable = vec![vec![false; m]; m];
    for c in 0..m {
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if reachable[c][x] {
                continue;
            }
            reachable[c][x] = true;
            stack.extend(condensation[x].iter().copied());
        }
    }
    SccDecomposition { components, component_of, condensation, reachable }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cycles_with_bridge() {
        // 0 <-> 1 -> 2 <-> 3
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let scc = strongly_connected_components(&adj);
        assert_eq!(scc.components.len(), 2);
        let a = scc.component_of[0];
        let b = scc.component_of[2];
        assert_ne!(a, b);
        assert!(scc.reachable[a][b]);
        assert!(!scc.reachable[b][a]);
        assert!(scc.comparable(a, b));
    }

    #[test]
    fn condensation_is_acyclic_and_partitioning() {
        let adj = vec![vec![1], vec![2], vec![0], vec![0, 4], vec![3]];
        let scc = strongly_connected_components(&adj);
        let total: usize = scc.components.iter().map(|c| c.len()).sum();
        assert_eq!(total, 5);
        // no component reaches itself through the condensation
        for (c, row) in scc.condensation.iter().enumerate() {
            for &d in row {
                assert!(!(scc.reachable[d][c]), "cycle through condensation");
            }
        }
        // transitivity
        let m = scc.components.len();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    if scc.reachable[a][b] && scc.reachable[b][c] {
                        assert!(scc.reachable[a][c]);
                    }
                }
            }
        }
    }
}
