use petgraph::algo::{has_path_connecting, tarjan_scc};
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::unionfind::UnionFind;

use crate::model::Complex;

/// Complex graph of a (sub)network.
#[derive(Clone, Debug)]
pub struct NetworkGraph {
    pub nodes: Vec<Complex>,
    /// `(source, target)` node indices, one per reaction.
    pub edges: Vec<(usize, usize)>,
    /// Node indices per connected component of the underlying undirected graph.
    pub linkage_classes: Vec<Vec<usize>>,
    /// Strongly connected components, each sorted.
    pub sccs: Vec<Vec<usize>>,
    /// `terminal[k]`: no edge leaves `sccs[k]`.
    pub terminal: Vec<bool>,
    graph: DiGraph<(), ()>,
    scc_of: Vec<usize>,
}

impl NetworkGraph {
    /// Builds the graph of `reactions`; `extra` adds isolated nodes unless already present.
    pub fn build<'a>(reactions: impl IntoIterator<Item = (&'a Complex, &'a Complex)>, extra: &[Complex]) -> Self {
        let mut nodes: Vec<Complex> = Vec::new();
        let id = |c: &Complex, nodes: &mut Vec<Complex>| match nodes.iter().position(|x| x == c) {
            Some(i) => i,
            None => {
                nodes.push(c.clone());
                nodes.len() - 1
            }
        };
        let mut edges = Vec::new();
        for (a, b) in reactions {
            let i = id(a, &mut nodes);
            let j = id(b, &mut nodes);
            edges.push((i, j));
        }
        for c in extra {
            id(c, &mut nodes);
        }
        let k = nodes.len();
        let mut graph = DiGraph::<(), ()>::with_capacity(k, edges.len());
        for _ in 0..k {
            graph.add_node(());
        }
        let mut uf = UnionFind::<usize>::new(k);
        for &(a, b) in &edges {
            graph.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
            uf.union(a, b);
        }
        let labels = uf.into_labeling();
        let mut linkage_classes: Vec<Vec<usize>> = Vec::new();
        let mut rep: Vec<usize> = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            match rep.iter().position(|&x| x == l) {
                Some(c) => linkage_classes[c].push(i),
                None => {
                    rep.push(l);
                    linkage_classes.push(vec![i]);
                }
            }
        }
        let mut sccs: Vec<Vec<usize>> =
            tarjan_scc(&graph).into_iter().map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|x| x.index()).collect();
                v.sort_unstable();
                v
            }).collect();
        sccs.sort();
        let mut scc_of = vec![0; k];
        for (c, members) in sccs.iter().enumerate() {
            for &i in members {
                scc_of[i] = c;
            }
        }
        let mut terminal = vec![true; sccs.len()];
        for &(a, b) in &edges {
            if scc_of[a] != scc_of[b] {
                terminal[scc_of[a]] = false;
            }
        }
        NetworkGraph { nodes, edges, linkage_classes, sccs, terminal, graph, scc_of }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_index(&self, c: &Complex) -> Option<usize> {
        self.nodes.iter().position(|x| x == c)
    }

    pub fn scc_of(&self, node: usize) -> usize {
        self.scc_of[node]
    }

    pub fn reaches(&self, from: usize, to: usize) -> bool {
        has_path_connecting(&self.graph, NodeIndex::new(from), NodeIndex::new(to), None)
    }

    /// Every linkage class is strongly connected; equivalently each edge stays inside one SCC.
    pub fn weakly_reversible(&self) -> bool {
        self.edges.iter().all(|&(a, b)| self.scc_of[a] == self.scc_of[b])
    }
}
