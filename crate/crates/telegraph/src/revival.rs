//! Revival peaks in a correlation curve.
//!
//! A revival is a strict local maximum of N(τ) found after N first drops
//! below [`DECAY_LEVEL`], with prominence of at least [`MIN_PROMINENCE`].
//! Prominence is measured as usual: the height above the higher of the two
//! lowest points reachable on either side before meeting a taller sample or
//! the end of the search region.

use serde::Serialize;

pub const DECAY_LEVEL: f64 = 0.5;
pub const MIN_PROMINENCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub index: usize,
    pub tau: f64,
    pub height: f64,
    pub prominence: f64,
}

/// All revival peaks of `values` sampled on `tau`, in time order.
pub fn find_revivals(tau: &[f64], values: &[f64]) -> Vec<Peak> {
    assert_eq!(tau.len(), values.len(), "tau and values differ in length");
    let Some(start) = values.iter().position(|&v| v < DECAY_LEVEL) else {
        return Vec::new();
    };
    let region = &values[start..];
    let mut peaks = Vec::new();
    for i in 1..region.len().saturating_sub(1) {
        let h = region[i];
        if !(region[i - 1] < h && h > region[i + 1]) {
            continue;
        }
        let prominence = h - side_base(region[..i].iter().rev(), h).max(side_base(region[i + 1..].iter(), h));
        if prominence >= MIN_PROMINENCE {
            peaks.push(Peak {
                index: start + i,
                tau: tau[start + i],
                height: h,
                prominence,
            });
        }
    }
    peaks
}

/// Lowest value walking away from a peak until a taller sample appears.
fn side_base<'a>(walk: impl Iterator<Item = &'a f64>, height: f64) -> f64 {
    let mut base = height;
    for &v in walk {
        if v > height {
            break;
        }
        base = base.min(v);
    }
    base
}

pub fn first_revival(tau: &[f64], values: &[f64]) -> Option<Peak> {
    find_revivals(tau, values).into_iter().next()
}
