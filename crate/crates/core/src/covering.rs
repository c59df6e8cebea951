//! Bounded-overlap selection from a finite family of symmetric intervals.
//!
//! Intervals are visited by decreasing radius (ties by increasing center)
//! and kept whenever their center is not yet covered by a kept interval.
//! The kept intervals cover every center and no point lies in more than two
//! of them.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{IntegerInterval, Profile, SymmetricInterval};

/// Selected intervals together with their positions in the input family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub indices: Vec<usize>,
    pub intervals: Vec<SymmetricInterval>,
}

impl Selection {
    /// Whether every center of `family` lies in some selected interval.
    pub fn covers_centers(&self, family: &[SymmetricInterval]) -> bool {
        family
            .iter()
            .all(|s| self.intervals.iter().any(|c| c.contains(s.center)))
    }

    /// Hull of the selected intervals.
    pub fn hull(&self) -> Option<IntegerInterval> {
        self.intervals
            .iter()
            .map(|s| s.to_interval())
            .reduce(|a, b| a.hull(&b))
    }

    /// Largest number of selected intervals containing a common point.
    pub fn max_overlap(&self) -> u32 {
        let Some(h) = self.hull() else { return 0 };
        overlap_counts(&self.intervals, h)
            .into_iter()
            .max()
            .unwrap_or(0)
    }
}

/// Greedy selection by decreasing radius.
pub fn select_cover(family: &[SymmetricInterval]) -> Selection {
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by(|&a, &b| {
        family[b]
            .radius
            .cmp(&family[a].radius)
            .then(family[a].center.cmp(&family[b].center))
            .then(a.cmp(&b))
    });
    let mut indices = Vec::new();
    let mut intervals: Vec<SymmetricInterval> = Vec::new();
    for i in order {
        let s = family[i];
        if !intervals.iter().any(|c| c.contains(s.center)) {
            indices.push(i);
            intervals.push(s);
        }
    }
    Selection { indices, intervals }
}

fn overlap_counts(intervals: &[SymmetricInterval], window: IntegerInterval) -> Vec<u32> {
    let len = window.len() as usize;
    let mut diff = vec![0i64; len + 1];
    for s in intervals {
        if let Some(j) = s.to_interval().intersect(&window) {
            diff[(j.lo() - window.lo()) as usize] += 1;
            diff[(j.hi() - window.lo()) as usize + 1] -= 1;
        }
    }
    let mut run = 0i64;
    diff[..len]
        .iter()
        .map(|d| {
            run += d;
            run as u32
        })
        .collect()
}

/// `Σ_i χ_{S_i}(k)` over the selected intervals, sampled on `window`.
pub fn overlap_profile(selection: &Selection, window: IntegerInterval) -> Result<Profile> {
    let counts = overlap_counts(&selection.intervals, window);
    let outside = if selection
        .hull()
        .is_some_and(|h| !window.contains_interval(&h))
    {
        f64::INFINITY
    } else {
        0.0
    };
    Ok(
        Profile::new(window, counts.into_iter().map(f64::from).collect())?
            .with_outside_bound(outside),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: i64, r: u64) -> SymmetricInterval {
        SymmetricInterval::new(c, r)
    }

    #[test]
    fn small_families() {
        let fam = [s(0, 1), s(5, 3), s(2, 0), s(9, 1), s(12, 0)];
        let sel = select_cover(&fam);
        assert_eq!(sel.indices, vec![1, 0, 3, 4]);
        assert!(sel.covers_centers(&fam));
        assert!(sel.max_overlap() <= 2);
        assert!(select_cover(&[]).intervals.is_empty());
    }

    #[test]
    fn nested_family_keeps_the_largest() {
        let fam: Vec<_> = (0..10).map(|r| s(0, r)).collect();
        let sel = select_cover(&fam);
        assert_eq!(sel.intervals, vec![s(0, 9)]);
    }

    #[test]
    fn overlap_profile_counts() {
        let sel = Selection {
            indices: vec![0, 1],
            intervals: vec![s(0, 2), s(3, 1)],
        };
        let w = IntegerInterval::new(-3, 5).unwrap();
        let p = overlap_profile(&sel, w).unwrap();
        assert_eq!(
            p.values(),
            &[0.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 1.0, 0.0][..]
        );
        assert_eq!(p.outside_bound(), 0.0);
    }
}
