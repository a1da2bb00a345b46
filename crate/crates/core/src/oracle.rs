//! Brute-force reference implementations used to validate the fast paths.

use crate::code::{CodeGeometry, Syndrome};
use crate::error::{Error, Result};
use crate::matching::{matching_weight, min_weight_perfect_matching, site_distance};
use crate::noise::rng_stream;
use rand::seq::index::sample;
use rand::Rng;

/// Minimum total distance over all perfect matchings of `sites`, found by
/// enumerating every one of the (n−1)!! pairings.
pub fn brute_force_matching_weight(g: &CodeGeometry, sites: &[usize]) -> Result<usize> {
    if sites.len() % 2 == 1 {
        return Err(Error::InvalidSyndrome(format!("cannot perfectly match {} detections", sites.len())));
    }
    fn go(g: &CodeGeometry, sites: &[usize], used: &mut [bool], acc: usize, best: &mut usize) {
        if acc >= *best {
            return;
        }
        let Some(i) = used.iter().position(|u| !u) else {
            *best = acc;
            return;
        };
        used[i] = true;
        for j in i + 1..sites.len() {
            if !used[j] {
                used[j] = true;
                go(g, sites, used, acc + site_distance(g, sites[i], sites[j]), best);
                used[j] = false;
            }
        }
        used[i] = false;
    }
    let mut best = usize::MAX;
    go(g, sites, &mut vec![false; sites.len()], 0, &mut best);
    Ok(if sites.is_empty() { 0 } else { best })
}

/// Outcome of comparing the blossom matcher against the brute-force minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingCheck {
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<Syndrome>,
}

/// Draws `trials` random same-type detection sets of even size up to
/// `max_detections` and compares matching weights with the brute force.
pub fn check_matching(g: &CodeGeometry, trials: usize, max_detections: usize, seed: u64) -> Result<MatchingCheck> {
    let n_sites = g.n_vertices();
    let cap = max_detections.min(n_sites) / 2;
    if cap == 0 {
        return Err(Error::InvalidArgument("max_detections must allow at least one pair".into()));
    }
    let mut rng = rng_stream(seed, 0);
    let mut failures = 0;
    let mut first_failure = None;
    for _ in 0..trials {
        let n = 2 * rng.gen_range(1..=cap);
        let mut sites = sample(&mut rng, n_sites, n).into_vec();
        sites.sort_unstable();
        let fast = min_weight_perfect_matching(g, &sites)?;
        if matching_weight(g, &sites, &fast) != brute_force_matching_weight(g, &sites)? {
            failures += 1;
            if first_failure.is_none() {
                let mut s = Syndrome::zeros(g.syndrome_len());
                for &v in &sites {
                    s.flip(v);
                }
                first_failure = Some(s);
            }
        }
    }
    Ok(MatchingCheck { trials, failures, first_failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let g = CodeGeometry::new(5).unwrap();
        assert_eq!(brute_force_matching_weight(&g, &[]).unwrap(), 0);
        assert_eq!(brute_force_matching_weight(&g, &[0, 12]).unwrap(), 4);
        // two adjacent pairs far apart
        assert_eq!(brute_force_matching_weight(&g, &[0, 1, 12, 13]).unwrap(), 2);
        assert!(brute_force_matching_weight(&g, &[0, 1, 2]).is_err());
    }

    #[test]
    fn blossom_agrees_on_a_few_hundred() {
        let g = CodeGeometry::new(5).unwrap();
        let report = check_matching(&g, 300, 10, 11).unwrap();
        assert_eq!(report.failures, 0, "{:?}", report.first_failure);
    }
}
