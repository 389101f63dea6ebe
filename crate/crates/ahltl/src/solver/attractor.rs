use super::{Arena, Player};

/// Predecessor lists in CSR form.
pub(super) struct Preds {
    offsets: Vec<u32>,
    sources: Vec<u32>,
}

impl Preds {
    pub(super) fn new(g: &Arena) -> Preds {
        let n = g.num_vertices();
        let mut count = vec![0u32; n + 1];
        for &t in &g.targets {
            count[t as usize + 1] += 1;
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut sources = vec![0u32; g.targets.len()];
        for v in 0..n as u32 {
            for &t in g.succ(v) {
                sources[fill[t as usize] as usize] = v;
                fill[t as usize] += 1;
            }
        }
        Preds { offsets: count, sources }
    }

    fn of(&self, v: u32) -> &[u32] {
        &self.sources[self.offsets[v as usize] as usize..self.offsets[v as usize + 1] as usize]
    }
}

/// Attractor of `target` for player `p` inside `alive`, computed layer by layer.
///
/// For each attracted vertex owned by `p` outside `target`, `strategy` receives
/// the lowest-id successor in an earlier layer. Returns the attractor, target first.
pub(super) fn attract(g: &Arena, preds: &Preds, alive: &[bool], target: &[u32], p: Player, strategy: &mut [u32]) -> Vec<u32> {
    const OUT: u32 = u32::MAX;
    let n = g.num_vertices();
    let mut rank = vec![OUT; n];
    let mut remaining = vec![0u32; n];
    let mut out: Vec<u32> = Vec::with_capacity(target.len());
    for &v in target {
        if rank[v as usize] == OUT {
            rank[v as usize] = 0;
            out.push(v);
        }
    }
    let mut layer_start = 0;
    let mut layer = 0u32;
    while layer_start < out.len() {
        let layer_end = out.len();
        let mut next: Vec<u32> = Vec::new();
        for k in layer_start..layer_end {
            for &v in preds.of(out[k]) {
                let vi = v as usize;
                if !alive[vi] || rank[vi] != OUT {
                    continue;
                }
                if g.owner(v) == p {
                    rank[vi] = OUT - 1;
                    next.push(v);
                } else {
                    if remaining[vi] == 0 {
                        remaining[vi] = g.succ(v).iter().filter(|&&t| alive[t as usize]).count() as u32 + 1;
                    }
                    remaining[vi] -= 1;
                    if remaining[vi] == 1 {
                        rank[vi] = OUT - 1;
                        next.push(v);
                    }
                }
            }
        }
        layer += 1;
        next.sort_unstable();
        for &v in &next {
            rank[v as usize] = layer;
        }
        for &v in &next {
            if g.owner(v) == p {
                strategy[v as usize] = g.succ(v).iter().copied().filter(|&t| rank[t as usize] < layer).min().unwrap();
            }
        }
        out.extend(next);
        layer_start = layer_end;
    }
    out
}
