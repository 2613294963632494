//! Plain-text triplet dump of assembled matrices.
//!
//! Format: a header line `# cylspec-triplets v1 rows=<n> cols=<n> nnz=<k>`,
//! followed by one `row col re im` line per stored entry (0-based indices,
//! values in `{:.17e}`), ordered by row then column.

use std::fmt::Write;

use super::guide::BandedOperator2D;
use super::tridiag::{ComplexTridiagonalOperator, TridiagonalOperator};

pub type Triplet = (usize, usize, f64, f64);

pub trait TripletSource {
    fn dimension(&self) -> usize;
    fn triplets(&self) -> Vec<Triplet>;
}

impl TripletSource for TridiagonalOperator {
    fn dimension(&self) -> usize {
        self.dim()
    }

    fn triplets(&self) -> Vec<Triplet> {
        let n = self.dim();
        let mut t = Vec::with_capacity(3 * n);
        for i in 0..n {
            if i > 0 {
                t.push((i, i - 1, self.off[i - 1], 0.0));
            }
            t.push((i, i, self.diag[i], 0.0));
            if i + 1 < n {
                t.push((i, i + 1, self.off[i], 0.0));
            }
        }
        t
    }
}

impl TripletSource for ComplexTridiagonalOperator {
    fn dimension(&self) -> usize {
        self.dim()
    }

    fn triplets(&self) -> Vec<Triplet> {
        let n = self.dim();
        let mut t = Vec::with_capacity(3 * n);
        for i in 0..n {
            if i > 0 {
                let v = self.lower[i - 1];
                t.push((i, i - 1, v.re, v.im));
            }
            t.push((i, i, self.diag[i].re, self.diag[i].im));
            if i + 1 < n {
                let v = self.upper[i];
                t.push((i, i + 1, v.re, v.im));
            }
        }
        t
    }
}

impl TripletSource for BandedOperator2D {
    fn dimension(&self) -> usize {
        self.dim()
    }

    fn triplets(&self) -> Vec<Triplet> {
        let n = self.dim();
        let bw = self.bandwidth;
        let mut t = Vec::new();
        for p in 0..n {
            for q in p.saturating_sub(bw)..(p + bw + 1).min(n) {
                let v = self.get(p, q);
                if v != 0.0 {
                    t.push((p, q, v, 0.0));
                }
            }
        }
        t
    }
}

pub fn triplet_text<M: TripletSource + ?Sized>(m: &M) -> String {
    let t = m.triplets();
    let n = m.dimension();
    let mut out = format!("# cylspec-triplets v1 rows={n} cols={n} nnz={}\n", t.len());
    for (i, j, re, im) in t {
        let _ = writeln!(out, "{i} {j} {re:.17e} {im:.17e}");
    }
    out
}

/// Parses [`triplet_text`] output back into `(dimension, triplets)`.
pub fn parse_triplets(text: &str) -> Option<(usize, Vec<Triplet>)> {
    let mut lines = text.lines();
    let header = lines.next()?;
    let rows: usize = header
        .split_whitespace()
        .find_map(|w| w.strip_prefix("rows="))?
        .parse()
        .ok()?;
    let mut t = Vec::new();
    for line in lines {
        let mut it = line.split_whitespace();
        t.push((
            it.next()?.parse().ok()?,
            it.next()?.parse().ok()?,
            it.next()?.parse().ok()?,
            it.next()?.parse().ok()?,
        ));
    }
    Some((rows, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn triplets_round_trip(diag in proptest::collection::vec(-1e3f64..1e3, 3..12)) {
            let off: Vec<f64> = diag.iter().skip(1).map(|d| d * 0.37 - 1.0).collect();
            let op = TridiagonalOperator::from_parts(diag, off);
            let text = triplet_text(&op);
            let (n, back) = parse_triplets(&text).unwrap();
            prop_assert_eq!(n, op.dim());
            prop_assert_eq!(back, op.triplets());
        }
    }
}
