//! FIFO push-relabel on exact rationals, kept independent of the scaled
//! integer solver so the two can check each other.

use std::collections::VecDeque;

use crate::numeric::Rational;

pub(crate) fn max_flow_value(num_nodes: usize, arcs: &[(usize, usize, Rational)], s: usize, t: usize) -> Rational {
    if s == t || num_nodes == 0 {
        return Rational::zero();
    }
    let mut to = Vec::with_capacity(2 * arcs.len());
    let mut res = Vec::with_capacity(2 * arcs.len());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); num_nodes];
    for (u, v, c) in arcs {
        adj[*u].push(to.len());
        to.push(*v);
        res.push(c.clone());
        adj[*v].push(to.len());
        to.push(*u);
        res.push(Rational::zero());
    }

    let mut excess = vec![Rational::zero(); num_nodes];
    let mut active = vec![false; num_nodes];
    let mut queue = VecDeque::new();
    let mut height = exact_heights(num_nodes, &adj, &to, &res, s, t);
    height[s] = num_nodes;

    for &e in &adj[s] {
        let c = res[e].clone();
        if c.is_positive() {
            res[e] = Rational::zero();
            res[e ^ 1] += &c;
            let v = to[e];
            excess[v] += &c;
            if v != t && v != s && !active[v] {
                active[v] = true;
                queue.push_back(v);
            }
        }
    }

    let mut relabels = 0usize;
    while let Some(u) = queue.pop_front() {
        active[u] = false;
        // discharge u
        while excess[u].is_positive() {
            let mut pushed_any = false;
            for &e in &adj[u] {
                if !excess[u].is_positive() {
                    break;
                }
                let v = to[e];
                if res[e].is_positive() && height[u] == height[v] + 1 {
                    let amount = excess[u].clone().min(res[e].clone());
                    res[e] -= &amount;
                    res[e ^ 1] += &amount;
                    excess[u] -= &amount;
                    excess[v] += &amount;
                    pushed_any = true;
                    if v != s && v != t && !active[v] {
                        active[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            if excess[u].is_positive() && !pushed_any {
                let min_h = adj[u].iter().filter(|&&e| res[e].is_positive()).map(|&e| height[to[e]]).min();
                match min_h {
                    Some(h) => height[u] = h + 1,
                    None => break,
                }
                relabels += 1;
                if relabels.is_multiple_of(num_nodes) {
                    let fresh = exact_heights(num_nodes, &adj, &to, &res, s, t);
                    for v in 0..num_nodes {
                        if v != s {
                            height[v] = height[v].max(fresh[v]);
                        }
                    }
                }
            }
        }
    }
    excess[t].clone()
}

/// Valid labels: residual distance to `t`; for nodes that cannot reach `t`,
/// `n` plus the residual distance to `s`; `2n` for the rest.
fn exact_heights(n: usize, adj: &[Vec<usize>], to: &[usize], res: &[Rational], s: usize, t: usize) -> Vec<usize> {
    let dist_t = reverse_bfs(n, adj, to, res, t);
    let dist_s = reverse_bfs(n, adj, to, res, s);
    let mut height: Vec<usize> = (0..n)
        .map(|u| match (dist_t[u], dist_s[u]) {
            (Some(d), _) => d,
            (None, Some(d)) => n + d,
            (None, None) => 2 * n,
        })
        .collect();
    height[s] = n;
    height
}

fn reverse_bfs(n: usize, adj: &[Vec<usize>], to: &[usize], res: &[Rational], root: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; n];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].expect("queued nodes are labelled");
        // arcs u -> v with residual capacity are the reverses of v's arcs
        for &e in &adj[v] {
            let u = to[e];
            if dist[u].is_none() && res[e ^ 1].is_positive() {
                dist[u] = Some(d + 1);
                queue.push_back(u);
            }
        }
    }
    dist
}
