//! Lexicographic scans over strictly increasing index tuples.
//!
//! Parallel scans split the work by leading index and recombine in order, so
//! the reported tuple never depends on scheduling.

use itertools::Itertools;
use rayon::prelude::*;

fn scan_leading<T>(
    lead: usize,
    m: usize,
    k: usize,
    probe: &(impl Fn(&[usize]) -> Option<T> + Sync),
) -> Option<(Vec<usize>, T)> {
    let mut buf = vec![lead; k];
    for rest in (lead + 1..m).combinations(k - 1) {
        buf[1..].copy_from_slice(&rest);
        if let Some(hit) = probe(&buf) {
            return Some((buf, hit));
        }
    }
    None
}

/// The lexicographically first `k`-tuple of `0..m` accepted by `probe`.
pub(crate) fn first_match<T: Send>(
    m: usize,
    k: usize,
    parallel: bool,
    probe: impl Fn(&[usize]) -> Option<T> + Sync,
) -> Option<(Vec<usize>, T)> {
    debug_assert!(k >= 2);
    if k > m {
        return None;
    }
    let leads = 0..=(m - k);
    if parallel {
        leads
            .into_par_iter()
            .find_map_first(|lead| scan_leading(lead, m, k, &probe))
    } else {
        leads
            .into_iter()
            .find_map(|lead| scan_leading(lead, m, k, &probe))
    }
}

fn best_leading(
    lead: usize,
    m: usize,
    k: usize,
    score: &(impl Fn(&[usize]) -> f64 + Sync),
) -> Option<(Vec<usize>, f64)> {
    let mut buf = vec![lead; k];
    let mut best: Option<(Vec<usize>, f64)> = None;
    for rest in (lead + 1..m).combinations(k - 1) {
        buf[1..].copy_from_slice(&rest);
        let s = score(&buf);
        if best.as_ref().is_none_or(|(_, b)| s > *b) {
            best = Some((buf.clone(), s));
        }
    }
    best
}

/// The maximum of `score` over all `k`-tuples; ties go to the
/// lexicographically first tuple.
pub(crate) fn max_score(
    m: usize,
    k: usize,
    parallel: bool,
    score: impl Fn(&[usize]) -> f64 + Sync,
) -> Option<(Vec<usize>, f64)> {
    if k > m {
        return None;
    }
    let leads = 0..=(m - k);
    let per_lead: Vec<Option<(Vec<usize>, f64)>> = if parallel {
        leads
            .into_par_iter()
            .map(|lead| best_leading(lead, m, k, &score))
            .collect()
    } else {
        leads.map(|lead| best_leading(lead, m, k, &score)).collect()
    };
    per_lead
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(Vec<usize>, f64)>, cand| match acc {
            Some(a) if a.1 >= cand.1 => Some(a),
            _ => Some(cand),
        })
}
