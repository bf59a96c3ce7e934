//! Strongly connected components and the condensation DAG.
//!
//! Iterative Tarjan over an implicit graph: every vertex has `degree` edge
//! slots and `succ(v, i)` yields the target of slot `i`, if any. Component
//! ids are renumbered so that they increase with the smallest vertex of each
//! component.

const UNVISITED: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Condensation {
    component_of: Vec<usize>,
    components: Vec<Vec<usize>>,
    dag: Vec<Vec<usize>>,
}

impl Condensation {
    /// Condensation of a graph given by a per-vertex successor callback.
    pub fn new<F>(num_vertices: usize, mut successors: F) -> Self
    where
        F: FnMut(usize, &mut Vec<usize>),
    {
        let mut buf = Vec::new();
        let mut adj_start = Vec::with_capacity(num_vertices + 1);
        let mut adj = Vec::new();
        for v in 0..num_vertices {
            adj_start.push(adj.len());
            buf.clear();
            successors(v, &mut buf);
            adj.extend_from_slice(&buf);
        }
        adj_start.push(adj.len());
        Self::from_csr(num_vertices, &adj_start, &adj)
    }

    /// Condensation of an implicit graph with at most `degree` out-edges per
    /// vertex, without materializing the adjacency.
    pub fn with_degree<F>(num_vertices: usize, degree: usize, succ: F) -> Self
    where
        F: Fn(usize, usize) -> Option<usize>,
    {
        let raw = tarjan(num_vertices, degree, &succ);
        Self::finish(raw, |v, out| out.extend((0..degree).filter_map(|i| succ(v, i))))
    }

    fn from_csr(num_vertices: usize, start: &[usize], adj: &[usize]) -> Self {
        let succ = |v: usize, i: usize| {
            let s = start[v] + i;
            (s < start[v + 1]).then(|| adj[s])
        };
        let degree = (0..num_vertices)
            .map(|v| start[v + 1] - start[v])
            .max()
            .unwrap_or(0);
        let raw = tarjan(num_vertices, degree, &succ);
        Self::finish(raw, |v, out| out.extend_from_slice(&adj[start[v]..start[v + 1]]))
    }

    fn finish<G>(raw: Vec<usize>, mut edges: G) -> Self
    where
        G: FnMut(usize, &mut Vec<usize>),
    {
        let n = raw.len();
        let count = raw.iter().map(|&c| c + 1).max().unwrap_or(0);
        // vertices are visited in increasing order, so the first vertex seen
        // for each raw id is its smallest member
        let mut renumber = vec![UNVISITED; count];
        let mut next = 0;
        let mut component_of = vec![0; n];
        for v in 0..n {
            let r = raw[v];
            if renumber[r] == UNVISITED {
                renumber[r] = next;
                next += 1;
            }
            component_of[v] = renumber[r];
        }
        let mut components = vec![Vec::new(); count];
        for v in 0..n {
            components[component_of[v]].push(v);
        }
        let mut dag = vec![Vec::new(); count];
        let mut out = Vec::new();
        for v in 0..n {
            out.clear();
            edges(v, &mut out);
            let c = component_of[v];
            for &w in &out {
                let d = component_of[w];
                if d != c {
                    dag[c].push(d);
                }
            }
        }
        for succ in &mut dag {
            succ.sort_unstable();
            succ.dedup();
        }
        Self {
            component_of,
            components,
            dag,
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    /// Vertices of component `c`, sorted.
    pub fn component(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Components directly reachable from `c`, sorted, without `c` itself.
    pub fn successors(&self, c: usize) -> &[usize] {
        &self.dag[c]
    }

    /// Components with no outgoing condensation edge, in increasing id order.
    pub fn terminal_components(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&c| self.dag[c].is_empty())
    }

    /// A topological order of the components (sources first). Among
    /// components that are ready at the same time the smallest id goes first.
    pub fn topological_order(&self) -> Vec<usize> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        let mut indegree = vec![0usize; self.len()];
        for succ in &self.dag {
            for &d in succ {
                indegree[d] += 1;
            }
        }
        let mut ready: BinaryHeap<Reverse<usize>> = (0..self.len())
            .filter(|&c| indegree[c] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(self.len());
        while let Some(Reverse(c)) = ready.pop() {
            order.push(c);
            for &d in &self.dag[c] {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    ready.push(Reverse(d));
                }
            }
        }
        order
    }
}

/// Raw Tarjan component ids (reverse topological order of discovery).
fn tarjan<F>(n: usize, degree: usize, succ: &F) -> Vec<usize>
where
    F: Fn(usize, usize) -> Option<usize>,
{
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut next_comp = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(frame) = frames.last_mut() {
            let (v, slot) = *frame;
            if slot < degree {
                frame.1 += 1;
                let Some(w) = succ(v, slot) else { continue };
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Condensation {
        Condensation::new(n, |v, out| {
            out.extend(edges.iter().filter(|e| e.0 == v).map(|e| e.1))
        })
    }

    #[test]
    fn isolated_vertices() {
        let c = from_edges(4, &[]);
        assert_eq!(c.len(), 4);
        for v in 0..4 {
            assert_eq!(c.component(c.component_of(v)), &[v]);
        }
        assert_eq!(c.terminal_components().count(), 4);
    }

    #[test]
    fn ids_follow_smallest_vertex() {
        // 3 <-> 1 -> 0 -> 2 -> 0 ; 4 -> 3
        let c = from_edges(5, &[(3, 1), (1, 3), (1, 0), (0, 2), (2, 0), (4, 3)]);
        assert_eq!(c.len(), 3);
        assert_eq!(c.component(0), &[0, 2]);
        assert_eq!(c.component(1), &[1, 3]);
        assert_eq!(c.component(2), &[4]);
        assert_eq!(c.successors(1), &[0]);
        assert_eq!(c.successors(2), &[1]);
        assert_eq!(c.terminal_components().collect::<Vec<_>>(), vec![0]);
        assert_eq!(c.topological_order(), vec![2, 1, 0]);
    }

    #[test]
    fn deduplicates_dag_edges() {
        let c = from_edges(3, &[(0, 1), (0, 2), (1, 2), (2, 1)]);
        assert_eq!(c.len(), 2);
        assert_eq!(c.successors(0), &[1]);
    }

    #[test]
    fn implicit_and_explicit_agree() {
        // functional graph q -> (3q + 1) mod 10 and q -> q / 2
        let succ = |v: usize, i: usize| Some(if i == 0 { (3 * v + 1) % 10 } else { v / 2 });
        let a = Condensation::with_degree(10, 2, succ);
        let b = Condensation::new(10, |v, out| out.extend([succ(v, 0).unwrap(), succ(v, 1).unwrap()]));
        assert_eq!(a.components(), b.components());
        for c in 0..a.len() {
            assert_eq!(a.successors(c), b.successors(c));
        }
    }

    #[test]
    fn deep_path_does_not_overflow() {
        let n = 200_000;
        let c = Condensation::with_degree(n, 1, |v, _| (v + 1 < n).then_some(v + 1));
        assert_eq!(c.len(), n);
        assert_eq!(c.terminal_components().collect::<Vec<_>>(), vec![n - 1]);
    }
}
