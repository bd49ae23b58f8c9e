//! Product-form basis inverse: `B^-1 = E_k ... E_1` with sparse eta columns.

#[derive(Debug, Clone, Default)]
pub(crate) struct EtaFile {
    pivot_row: Vec<usize>,
    pivot_inv: Vec<f64>,
    start: Vec<usize>,
    index: Vec<usize>,
    value: Vec<f64>,
}

impl EtaFile {
    pub fn clear(&mut self) {
        self.pivot_row.clear();
        self.pivot_inv.clear();
        self.start.clear();
        self.index.clear();
        self.value.clear();
    }

    /// Appends the eta matrix that pivots `column` (already transformed by
    /// the current file) on row `p`.
    pub fn push(&mut self, p: usize, column: &[f64]) {
        let pivot = column[p];
        self.pivot_row.push(p);
        self.pivot_inv.push(1.0 / pivot);
        self.start.push(self.index.len());
        for (i, &a) in column.iter().enumerate() {
            if i != p && a != 0.0 {
                self.index.push(i);
                self.value.push(-a / pivot);
            }
        }
    }

    /// Same as [`push`](Self::push) for a column given as sparse pairs.
    pub fn push_sparse(&mut self, p: usize, pivot: f64, entries: impl Iterator<Item = (usize, f64)>) {
        self.pivot_row.push(p);
        self.pivot_inv.push(1.0 / pivot);
        self.start.push(self.index.len());
        for (i, a) in entries {
            if i != p && a != 0.0 {
                self.index.push(i);
                self.value.push(-a / pivot);
            }
        }
    }

    fn range(&self, k: usize) -> std::ops::Range<usize> {
        let end = self.start.get(k + 1).copied().unwrap_or(self.index.len());
        self.start[k]..end
    }

    /// `v <- B^-1 v`
    pub fn ftran(&self, v: &mut [f64]) {
        for k in 0..self.pivot_row.len() {
            let p = self.pivot_row[k];
            let t = v[p];
            if t == 0.0 {
                continue;
            }
            v[p] = t * self.pivot_inv[k];
            for e in self.range(k) {
                v[self.index[e]] += self.value[e] * t;
            }
        }
    }

    /// `v <- v^T B^-1`
    pub fn btran(&self, v: &mut [f64]) {
        for k in (0..self.pivot_row.len()).rev() {
            let p = self.pivot_row[k];
            let mut t = v[p] * self.pivot_inv[k];
            for e in self.range(k) {
                t += self.value[e] * v[self.index[e]];
            }
            v[p] = t;
        }
    }
}
