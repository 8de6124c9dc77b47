//! Direct sparse Cholesky for weighted graph Laplacians.
//!
//! The systems solved here are graph Laplacians of (sub)grids with extra
//! diagonal mass from eliminated Dirichlet neighbours, so they are symmetric
//! positive definite as long as every connected component is anchored.
//! Orderings are geometric nested dissection, which we can compute exactly
//! because the graphs are lattices.
//!
//! The factorization is split into a symbolic phase (elimination tree, row
//! patterns, L structure) and a numeric phase, so Newton-type outer loops can
//! refactor with new weights at fixed sparsity.

use crate::error::{Error, Result};

/// Symbolic analysis of A = L L^T for a fixed edge pattern and ordering.
pub struct SpdGraphPattern {
    n: usize,
    edges: Vec<(u32, u32)>,
    perm: Vec<u32>,
    iperm: Vec<u32>,
    up_colptr: Vec<usize>,
    up_rows: Vec<u32>,
    /// Slot of each input edge in the upper-triangular value array.
    edge_slot: Vec<usize>,
    /// Slot of each permuted column's diagonal entry.
    diag_slot: Vec<usize>,
    /// L column pointers; the diagonal is the first entry of each column.
    lp: Vec<usize>,
    li: Vec<u32>,
    /// Row patterns of L in topological order, one slice per row.
    rowptr: Vec<usize>,
    rowcols: Vec<u32>,
}

/// Numeric values of a Cholesky factor; interpreted through the pattern that
/// produced them.
pub struct CholFactor {
    lx: Vec<f64>,
}

impl SpdGraphPattern {
    /// `edges` are undirected off-diagonal couplings between node indices
    /// `< n`; `order` is the elimination order (a permutation of 0..n).
    pub fn new(n: usize, edges: Vec<(u32, u32)>, order: Vec<u32>) -> Result<SpdGraphPattern> {
        assert_eq!(order.len(), n);
        let mut iperm = vec![0u32; n];
        for (k, &v) in order.iter().enumerate() {
            iperm[v as usize] = k as u32;
        }

        // Upper-triangular pattern of the permuted matrix, with duplicate
        // couplings merged into one slot.
        let mut entries: Vec<(u32, u32, u32)> = Vec::with_capacity(edges.len() + n);
        for (eid, &(a, b)) in edges.iter().enumerate() {
            debug_assert!(a != b, "self loop in Laplacian pattern");
            let (pa, pb) = (iperm[a as usize], iperm[b as usize]);
            let (r, c) = if pa < pb { (pa, pb) } else { (pb, pa) };
            entries.push((c, r, eid as u32));
        }
        const DIAG: u32 = u32::MAX;
        for k in 0..n as u32 {
            entries.push((k, k, DIAG));
        }
        entries.sort_unstable_by_key(|&(c, r, _)| (c, r));

        let mut up_colptr = vec![0usize; n + 1];
        let mut up_rows: Vec<u32> = Vec::new();
        let mut edge_slot = vec![usize::MAX; edges.len()];
        let mut diag_slot = vec![usize::MAX; n];
        {
            let mut idx = 0;
            while idx < entries.len() {
                let (c, r, _) = entries[idx];
                let slot = up_rows.len();
                up_rows.push(r);
                while idx < entries.len() && entries[idx].0 == c && entries[idx].1 == r {
                    let tag = entries[idx].2;
                    if tag == DIAG {
                        diag_slot[c as usize] = slot;
                    } else {
                        edge_slot[tag as usize] = slot;
                    }
                    idx += 1;
                }
                up_colptr[c as usize + 1] = up_rows.len();
            }
            for k in 0..n {
                if up_colptr[k + 1] == 0 {
                    up_colptr[k + 1] = up_colptr[k];
                }
            }
        }

        // Elimination tree from the upper pattern.
        let mut parent = vec![-1i64; n];
        let mut ancestor = vec![-1i64; n];
        for k in 0..n {
            for p in up_colptr[k]..up_colptr[k + 1] {
                let mut i = up_rows[p] as i64;
                while i != -1 && (i as usize) < k {
                    let inext = ancestor[i as usize];
                    ancestor[i as usize] = k as i64;
                    if inext == -1 {
                        parent[i as usize] = k as i64;
                    }
                    i = inext;
                }
            }
        }

        // Two ereach sweeps: first to count, then to fill patterns.
        let mut stamp = vec![u32::MAX; n];
        let mut stack = vec![0u32; n];
        let mut colcount = vec![1usize; n]; // diagonal
        let mut rowcount = vec![0usize; n];
        for k in 0..n {
            stamp[k] = k as u32;
            for p in up_colptr[k]..up_colptr[k + 1] {
                let mut i = up_rows[p] as usize;
                while i < k && stamp[i] != k as u32 {
                    stamp[i] = k as u32;
                    colcount[i] += 1;
                    rowcount[k] += 1;
                    i = if parent[i] == -1 {
                        break;
                    } else {
                        parent[i] as usize
                    };
                }
            }
        }

        let mut lp = vec![0usize; n + 1];
        for k in 0..n {
            lp[k + 1] = lp[k] + colcount[k];
        }
        let mut rowptr = vec![0usize; n + 1];
        for k in 0..n {
            rowptr[k + 1] = rowptr[k] + rowcount[k];
        }
        let nnz_l = lp[n];
        let mut li = vec![0u32; nnz_l];
        let mut rowcols = vec![0u32; rowptr[n]];
        let mut cfill: Vec<usize> = lp[..n].to_vec();
        let mut stamp2 = vec![u32::MAX; n];
        for k in 0..n {
            stamp2[k] = k as u32;
            // ereach: collect the row pattern in topological order
            let mut top = n;
            for p in up_colptr[k]..up_colptr[k + 1] {
                let mut i = up_rows[p] as usize;
                if i >= k {
                    continue;
                }
                let mut len = 0;
                while stamp2[i] != k as u32 {
                    stack[len] = i as u32;
                    len += 1;
                    stamp2[i] = k as u32;
                    if parent[i] == -1 {
                        break;
                    }
                    i = parent[i] as usize;
                }
                while len > 0 {
                    len -= 1;
                    top -= 1;
                    // reuse the tail of `stack` as the pattern buffer
                    let v = stack[len];
                    stack[top] = v;
                }
            }
            let base = rowptr[k];
            for (off, t) in (top..n).enumerate() {
                let j = stack[t];
                rowcols[base + off] = j;
                li[cfill[j as usize]] = k as u32;
                cfill[j as usize] += 1;
            }
            li[cfill[k]] = k as u32;
            cfill[k] += 1;
        }

        Ok(SpdGraphPattern {
            n,
            edges,
            perm: order,
            iperm,
            up_colptr,
            up_rows,
            edge_slot,
            diag_slot,
            lp,
            li,
            rowptr,
            rowcols,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l_nnz(&self) -> usize {
        self.lp[self.n]
    }

    /// Numeric factorization of the Laplacian with the given edge weights and
    /// extra diagonal mass (both indexed as supplied to `new`).
    pub fn factor(&self, edge_weights: &[f64], extra_diag: &[f64]) -> Result<CholFactor> {
        assert_eq!(edge_weights.len(), self.edges.len());
        assert_eq!(extra_diag.len(), self.n);
        let n = self.n;

        let mut av = vec![0.0f64; self.up_rows.len()];
        for (eid, &(a, b)) in self.edges.iter().enumerate() {
            let w = edge_weights[eid];
            av[self.edge_slot[eid]] -= w;
            av[self.diag_slot[self.iperm[a as usize] as usize]] += w;
            av[self.diag_slot[self.iperm[b as usize] as usize]] += w;
        }
        for (node, &d) in extra_diag.iter().enumerate() {
            av[self.diag_slot[self.iperm[node] as usize]] += d;
        }

        let mut lx = vec![0.0f64; self.l_nnz()];
        let mut x = vec![0.0f64; n];
        let mut cfill: Vec<usize> = self.lp[..n].to_vec();
        for k in 0..n {
            for p in self.up_colptr[k]..self.up_colptr[k + 1] {
                x[self.up_rows[p] as usize] = av[p];
            }
            let mut d = x[k];
            x[k] = 0.0;
            for &jj in &self.rowcols[self.rowptr[k]..self.rowptr[k + 1]] {
                let j = jj as usize;
                let lkj = x[j] / lx[self.lp[j]];
                x[j] = 0.0;
                for p in self.lp[j] + 1..cfill[j] {
                    x[self.li[p] as usize] -= lx[p] * lkj;
                }
                d -= lkj * lkj;
                lx[cfill[j]] = lkj;
                cfill[j] += 1;
            }
            if !(d > 0.0) {
                return Err(Error::numerical(format!(
                    "matrix not positive definite at pivot {k} (d = {d}); \
                     an unanchored component slipped through"
                )));
            }
            lx[cfill[k]] = d.sqrt();
            cfill[k] += 1;
        }
        Ok(CholFactor { lx })
    }

    /// Solves A x = b; `b` is indexed like the nodes given to `new`.
    pub fn solve(&self, factor: &CholFactor, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let lx = &factor.lx;
        let mut y = vec![0.0f64; n];
        for k in 0..n {
            y[k] = b[self.perm[k] as usize];
        }
        for j in 0..n {
            let yj = y[j] / lx[self.lp[j]];
            y[j] = yj;
            for p in self.lp[j] + 1..self.lp[j + 1] {
                y[self.li[p] as usize] -= lx[p] * yj;
            }
        }
        for j in (0..n).rev() {
            let mut s = y[j];
            for p in self.lp[j] + 1..self.lp[j + 1] {
                s -= lx[p] * y[self.li[p] as usize];
            }
            y[j] = s / lx[self.lp[j]];
        }
        let mut x = vec![0.0f64; n];
        for k in 0..n {
            x[self.perm[k] as usize] = y[k];
        }
        x
    }
}

/// Geometric nested dissection order for an nx x ny index grid (ny = 1 in 1D).
/// Children boxes are emitted before their separator line, so separators are
/// eliminated last.
pub fn nd_order_grid(nx: usize, ny: usize) -> Vec<u32> {
    let mut order = Vec::with_capacity(nx * ny);
    dissect(0, nx, 0, ny, nx, &mut order);
    debug_assert_eq!(order.len(), nx * ny);
    order
}

fn dissect(x0: usize, x1: usize, y0: usize, y1: usize, stride: usize, out: &mut Vec<u32>) {
    let w = x1 - x0;
    let h = y1 - y0;
    if w == 0 || h == 0 {
        return;
    }
    if w * h <= 8 {
        for j in y0..y1 {
            for i in x0..x1 {
                out.push((j * stride + i) as u32);
            }
        }
        return;
    }
    if w >= h {
        let m = x0 + w / 2;
        dissect(x0, m, y0, y1, stride, out);
        dissect(m + 1, x1, y0, y1, stride, out);
        for j in y0..y1 {
            out.push((j * stride + m) as u32);
        }
    } else {
        let m = y0 + h / 2;
        dissect(x0, x1, y0, m, stride, out);
        dissect(x0, x1, m + 1, y1, stride, out);
        for i in x0..x1 {
            out.push((m * stride + i) as u32);
        }
    }
}

/// Ordering for a torus grid: the wrap rings (i = 0 or j = 0) are kept as the
/// outermost separator and eliminated last; the remaining open box is ordered
/// by nested dissection.
pub fn nd_order_torus(nx: usize, ny: usize) -> Vec<u32> {
    let mut order = Vec::with_capacity(nx * ny);
    if ny == 1 {
        dissect(1, nx, 0, 1, nx, &mut order);
        order.push(0);
    } else {
        dissect(1, nx, 1, ny, nx, &mut order);
        for i in 1..nx {
            order.push(i as u32);
        }
        for j in 0..ny {
            order.push((j * nx) as u32);
        }
    }
    debug_assert_eq!(order.len(), nx * ny);
    order
}

/// Restrict a full-grid elimination order to a subset of kept nodes,
/// relabelled compactly by `compact[node]`.
pub fn restrict_order(full: &[u32], compact: &[Option<u32>], n_kept: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(n_kept);
    for &node in full {
        if let Some(c) = compact[node as usize] {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_solve(n: usize, edges: &[(u32, u32)], w: &[f64], d: &[f64], b: &[f64]) -> Vec<f64> {
        let mut a = vec![vec![0.0f64; n]; n];
        for (eid, &(i, j)) in edges.iter().enumerate() {
            let (i, j) = (i as usize, j as usize);
            a[i][j] -= w[eid];
            a[j][i] -= w[eid];
            a[i][i] += w[eid];
            a[j][j] += w[eid];
        }
        for k in 0..n {
            a[k][k] += d[k];
        }
        // Gaussian elimination with partial pivoting
        let mut x = b.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
                .unwrap();
            a.swap(col, piv);
            x.swap(col, piv);
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                x[r] -= f * x[col];
            }
        }
        for col in (0..n).rev() {
            for r in 0..col {
                x[r] -= a[r][col] / a[col][col] * x[col];
                a[r][col] = 0.0;
            }
            x[col] /= a[col][col];
        }
        x
    }

    fn grid_edges(nx: usize, ny: usize) -> Vec<(u32, u32)> {
        let mut e = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let n = (j * nx + i) as u32;
                if i + 1 < nx {
                    e.push((n, n + 1));
                }
                if j + 1 < ny {
                    e.push((n, n + nx as u32));
                }
            }
        }
        e
    }

    #[test]
    fn matches_dense_on_grid() {
        let (nx, ny) = (7, 5);
        let n = nx * ny;
        let edges = grid_edges(nx, ny);
        // deterministic pseudo-random weights
        let w: Vec<f64> = (0..edges.len())
            .map(|k| 0.5 + ((k * 2654435761) % 1000) as f64 / 500.0)
            .collect();
        let mut d = vec![0.0f64; n];
        d[0] = 2.0;
        d[n - 1] = 3.5;
        let b: Vec<f64> = (0..n)
            .map(|k| ((k * 48271) % 97) as f64 / 97.0 - 0.5)
            .collect();

        let pat = SpdGraphPattern::new(n, edges.clone(), nd_order_grid(nx, ny)).unwrap();
        let f = pat.factor(&w, &d).unwrap();
        let x = pat.solve(&f, &b);
        let xd = dense_solve(n, &edges, &w, &d, &b);
        for k in 0..n {
            assert!(
                (x[k] - xd[k]).abs() < 1e-9,
                "node {k}: {} vs {}",
                x[k],
                xd[k]
            );
        }
    }

    #[test]
    fn matches_dense_on_torus() {
        let (nx, ny) = (6, 6);
        let n = nx * ny;
        let mut edges = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let a = (j * nx + i) as u32;
                let bx = (j * nx + (i + 1) % nx) as u32;
                let by = ((((j + 1) % ny) * nx) + i) as u32;
                edges.push((a, bx));
                edges.push((a, by));
            }
        }
        let w: Vec<f64> = (0..edges.len())
            .map(|k| 1.0 + ((k * 7919) % 100) as f64 / 50.0)
            .collect();
        let mut d = vec![0.0f64; n];
        d[14] = 1.0; // pin one node to break the constant null space
        let b: Vec<f64> = (0..n).map(|k| ((k * 31) % 13) as f64 - 6.0).collect();

        let pat = SpdGraphPattern::new(n, edges.clone(), nd_order_torus(nx, ny)).unwrap();
        let f = pat.factor(&w, &d).unwrap();
        let x = pat.solve(&f, &b);
        let xd = dense_solve(n, &edges, &w, &d, &b);
        for k in 0..n {
            assert!((x[k] - xd[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn refactor_with_new_weights() {
        let edges = grid_edges(4, 4);
        let n = 16;
        let pat = SpdGraphPattern::new(n, edges.clone(), nd_order_grid(4, 4)).unwrap();
        let d = vec![1.0; n];
        let b = vec![1.0; n];
        let w1 = vec![1.0; edges.len()];
        let w2: Vec<f64> = (0..edges.len()).map(|k| 1.0 + k as f64 * 0.1).collect();
        let x1 = pat.solve(&pat.factor(&w1, &d).unwrap(), &b);
        let x2 = pat.solve(&pat.factor(&w2, &d).unwrap(), &b);
        let xd1 = dense_solve(n, &edges, &w1, &d, &b);
        let xd2 = dense_solve(n, &edges, &w2, &d, &b);
        for k in 0..n {
            assert!((x1[k] - xd1[k]).abs() < 1e-10);
            assert!((x2[k] - xd2[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn unanchored_system_is_reported() {
        let edges = vec![(0u32, 1u32)];
        let pat = SpdGraphPattern::new(2, edges, vec![0, 1]).unwrap();
        let res = pat.factor(&[1.0], &[0.0, 0.0]);
        assert!(res.is_err());
    }

    #[test]
    fn singleton_system() {
        let pat = SpdGraphPattern::new(1, vec![], vec![0]).unwrap();
        let f = pat.factor(&[], &[4.0]).unwrap();
        let x = pat.solve(&f, &[8.0]);
        assert!((x[0] - 2.0).abs() < 1e-15);
    }
}
