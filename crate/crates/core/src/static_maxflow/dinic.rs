//! Dinic's blocking-flow algorithm on integer capacities.

use std::collections::VecDeque;

/// Residual network with paired arcs: arc `2i` is forward, `2i + 1` its
/// reverse.
pub(crate) struct Dinic {
    from: Vec<u32>,
    to: Vec<u32>,
    residual: Vec<i128>,
    start: Vec<usize>,
    adj: Vec<u32>,
}

impl Dinic {
    pub(crate) fn new(num_nodes: usize, arcs: &[(usize, usize, i128)]) -> Self {
        let m = arcs.len();
        let mut from = Vec::with_capacity(2 * m);
        let mut to = Vec::with_capacity(2 * m);
        let mut residual = Vec::with_capacity(2 * m);
        let mut degree = vec![0usize; num_nodes + 1];
        for &(u, v, c) in arcs {
            from.extend([u as u32, v as u32]);
            to.extend([v as u32, u as u32]);
            residual.extend([c, 0]);
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut start = vec![0usize; num_nodes + 1];
        for i in 0..num_nodes {
            start[i + 1] = start[i] + degree[i];
        }
        let mut fill = start.clone();
        let mut adj = vec![0u32; 2 * m];
        for (e, &u) in from.iter().enumerate() {
            let u = u as usize;
            adj[fill[u]] = e as u32;
            fill[u] += 1;
        }
        Dinic { from, to, residual, start, adj }
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<i32>> {
        let mut level = vec![-1i32; self.start.len() - 1];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[self.start[u]..self.start[u + 1]] {
                let v = self.to[e as usize] as usize;
                if self.residual[e as usize] > 0 && level[v] < 0 {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        (level[t] >= 0).then_some(level)
    }

    /// Maximum flow value; afterwards `flow_on` reports per-arc flow.
    pub(crate) fn run(&mut self, s: usize, t: usize) -> i128 {
        let mut total = 0i128;
        while let Some(mut level) = self.levels(s, t) {
            let mut next = self.start.clone();
            let mut path: Vec<usize> = Vec::new();
            let mut u = s;
            loop {
                if u == t {
                    let push = path.iter().map(|&e| self.residual[e]).min().expect("nonempty path");
                    let mut cut_at = path.len();
                    for (k, &e) in path.iter().enumerate() {
                        self.residual[e] -= push;
                        self.residual[e ^ 1] += push;
                        if self.residual[e] == 0 && cut_at == path.len() {
                            cut_at = k;
                        }
                    }
                    total += push;
                    u = self.from[path[cut_at]] as usize;
                    path.truncate(cut_at);
                    continue;
                }
                let mut advanced = false;
                while next[u] < self.start[u + 1] {
                    let e = self.adj[next[u]] as usize;
                    let v = self.to[e] as usize;
                    if self.residual[e] > 0 && level[v] == level[u] + 1 {
                        path.push(e);
                        u = v;
                        advanced = true;
                        break;
                    }
                    next[u] += 1;
                }
                if advanced {
                    continue;
                }
                if u == s {
                    break;
                }
                // dead end: retire the node for this phase and backtrack
                level[u] = -1;
                let e = path.pop().expect("non-source node has an entering arc");
                u = self.from[e] as usize;
                next[u] += 1;
            }
        }
        total
    }

    /// Flow on original arc `i` given its initial capacity.
    pub(crate) fn flow_on(&self, i: usize, capacity: i128) -> i128 {
        capacity - self.residual[2 * i]
    }
}
