//! Transport distance between pair histograms under the `|Δx| + |Δy|` cost.

use crate::error::Result;
use crate::lp::{Cmp, LinearProgram};
use crate::prob::PairHistogram;

fn cost(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs() + (a.1 - b.1).abs()
}

/// Minimum transport cost between `h` and `g`. The side with the smaller
/// total count is padded with mass at `(0, 0)` before solving.
pub fn w_distance(h: &PairHistogram, g: &PairHistogram) -> Result<f64> {
    let mut src: Vec<((f64, f64), f64)> = h.support().to_vec();
    let mut dst: Vec<((f64, f64), f64)> = g.support().to_vec();
    let (th, tg) = (h.total(), g.total());
    if th < tg {
        src.push(((0.0, 0.0), tg - th));
    } else if tg < th {
        dst.push(((0.0, 0.0), th - tg));
    }
    if src.is_empty() || dst.is_empty() {
        return Ok(0.0);
    }
    let (k, l) = (src.len(), dst.len());
    let mut lp = LinearProgram::new(k * l);
    for (i, (a, _)) in src.iter().enumerate() {
        for (j, (b, _)) in dst.iter().enumerate() {
            lp.set_cost(i * l + j, cost(*a, *b));
        }
    }
    for (i, (_, c)) in src.iter().enumerate() {
        lp.add_row((0..l).map(|j| (i * l + j, 1.0)).collect(), Cmp::Eq, *c);
    }
    // The totals agree, so `≤` on the sinks forces equality without a
    // redundant row.
    for (j, (_, c)) in dst.iter().enumerate() {
        lp.add_row((0..k).map(|i| (i * l + j, 1.0)).collect(), Cmp::Le, *c * (1.0 + 1e-12) + 1e-15);
    }
    Ok(lp.solve()?.objective.max(0.0))
}
