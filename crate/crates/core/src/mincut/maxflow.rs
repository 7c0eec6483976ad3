//! Dinic max-flow with integer capacities on a CSR graph.

/// Directed graph with paired residual arcs. Node `n` is the source and
/// `n + 1` the sink.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    nodes: usize,
    first: Vec<usize>,
    head: Vec<u32>,
    rev: Vec<u32>,
    cap: Vec<i64>,
}

/// Arc list collected before freezing into CSR form.
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    nodes: usize,
    arcs: Vec<(u32, u32, i64, i64)>,
}

impl NetworkBuilder {
    /// `inner` non-terminal nodes; terminals are appended.
    pub fn new(inner: usize) -> Self {
        Self { nodes: inner + 2, arcs: Vec::new() }
    }

    pub fn source(&self) -> usize {
        self.nodes - 2
    }

    pub fn sink(&self) -> usize {
        self.nodes - 1
    }

    /// Arc `u → v` with capacity `forward` and its reverse with `backward`.
    pub fn add(&mut self, u: usize, v: usize, forward: i64, backward: i64) {
        debug_assert!(forward >= 0 && backward >= 0);
        if forward > 0 || backward > 0 {
            self.arcs.push((u as u32, v as u32, forward, backward));
        }
    }

    pub fn build(self) -> FlowNetwork {
        let n = self.nodes;
        let mut degree = vec![0usize; n + 1];
        for &(u, v, _, _) in &self.arcs {
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let first = degree;
        let m = first[n];
        let mut fill = first.clone();
        let mut head = vec![0u32; m];
        let mut rev = vec![0u32; m];
        let mut cap = vec![0i64; m];
        for &(u, v, f, b) in &self.arcs {
            let (eu, ev) = (fill[u as usize], fill[v as usize]);
            fill[u as usize] += 1;
            fill[v as usize] += 1;
            head[eu] = v;
            cap[eu] = f;
            rev[eu] = ev as u32;
            head[ev] = u;
            cap[ev] = b;
            rev[ev] = eu as u32;
        }
        FlowNetwork { nodes: n, first, head, rev, cap }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlowStats {
    pub phases: usize,
    pub value: i64,
}

impl FlowNetwork {
    pub fn source(&self) -> usize {
        self.nodes - 2
    }

    pub fn sink(&self) -> usize {
        self.nodes - 1
    }

    pub fn arc_count(&self) -> usize {
        self.head.len()
    }

    pub fn max_flow(&mut self) -> FlowStats {
        let (s, t) = (self.source(), self.sink());
        let mut stats = FlowStats::default();
        let mut level = vec![-1i32; self.nodes];
        let mut queue = Vec::with_capacity(self.nodes);
        loop {
            level.iter_mut().for_each(|l| *l = -1);
            level[s] = 0;
            queue.clear();
            queue.push(s);
            let mut qi = 0;
            while qi < queue.len() {
                let u = queue[qi];
                qi += 1;
                for e in self.first[u]..self.first[u + 1] {
                    let v = self.head[e] as usize;
                    if self.cap[e] > 0 && level[v] < 0 {
                        level[v] = level[u] + 1;
                        queue.push(v);
                    }
                }
            }
            if level[t] < 0 {
                return stats;
            }
            stats.phases += 1;
            stats.value += self.blocking_flow(&mut level);
        }
    }

    fn blocking_flow(&mut self, level: &mut [i32]) -> i64 {
        let (s, t) = (self.source(), self.sink());
        let mut it: Vec<usize> = self.first[..self.nodes].to_vec();
        let mut path: Vec<usize> = Vec::new();
        let mut total = 0;
        let mut u = s;
        loop {
            if u == t {
                let f = path.iter().map(|&e| self.cap[e]).min().expect("path reaches the sink");
                for &e in &path {
                    self.cap[e] -= f;
                    self.cap[self.rev[e] as usize] += f;
                }
                total += f;
                let k = path.iter().position(|&e| self.cap[e] == 0).expect("bottleneck arc saturates");
                path.truncate(k);
                u = if k == 0 { s } else { self.head[path[k - 1]] as usize };
                continue;
            }
            let end = self.first[u + 1];
            while it[u] < end {
                let e = it[u];
                let v = self.head[e] as usize;
                if self.cap[e] > 0 && level[v] == level[u] + 1 {
                    break;
                }
                it[u] += 1;
            }
            if it[u] < end {
                let e = it[u];
                path.push(e);
                u = self.head[e] as usize;
            } else {
                level[u] = -1;
                match path.pop() {
                    None => return total,
                    Some(e) => {
                        u = self.head[self.rev[e] as usize] as usize;
                        it[u] += 1;
                    }
                }
            }
        }
    }

    /// Nodes reachable from the source through arcs with residual capacity.
    pub fn source_side(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![self.source()];
        seen[self.source()] = true;
        while let Some(u) = stack.pop() {
            for e in self.first[u]..self.first[u + 1] {
                let v = self.head[e] as usize;
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Nodes that can still reach the sink through residual arcs.
    pub fn sink_side(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![self.sink()];
        seen[self.sink()] = true;
        while let Some(v) = stack.pop() {
            for e in self.first[v]..self.first[v + 1] {
                let u = self.head[e] as usize;
                let back = self.rev[e] as usize;
                if self.cap[back] > 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_network() {
        // Classic six-node example with max flow 23.
        let mut b = NetworkBuilder::new(4);
        let (s, t) = (b.source(), b.sink());
        b.add(s, 0, 16, 0);
        b.add(s, 1, 13, 0);
        b.add(0, 1, 10, 4);
        b.add(0, 2, 12, 0);
        b.add(2, 1, 9, 0);
        b.add(1, 3, 14, 0);
        b.add(3, 2, 7, 0);
        b.add(2, t, 20, 0);
        b.add(3, t, 4, 0);
        let mut net = b.build();
        assert_eq!(net.max_flow().value, 23);
        let src = net.source_side();
        let snk = net.sink_side();
        assert!(src[s] && !src[t] && snk[t]);
    }

    #[test]
    fn long_chain_does_not_recurse() {
        let n = 200_000;
        let mut b = NetworkBuilder::new(n);
        let (s, t) = (b.source(), b.sink());
        b.add(s, 0, 5, 0);
        for i in 0..n - 1 {
            b.add(i, i + 1, 7, 7);
        }
        b.add(n - 1, t, 9, 0);
        assert_eq!(b.build().max_flow().value, 5);
    }
}
