use std::collections::{BTreeSet, VecDeque};

use super::{cyclic_reduce, invert, min_rotation_up_to_inversion, Letter};
use crate::error::{Error, Result};

/// Cap on distinct words visited while exploring half-relator swaps.
const SWAP_SEARCH_CAP: usize = 20_000;

fn relator_rotations(relator: &[Letter]) -> Vec<Vec<Letter>> {
    let n = relator.len();
    let inv = invert(relator);
    let mut out = Vec::with_capacity(2 * n);
    for r in [relator, inv.as_slice()] {
        for s in 0..n {
            out.push(r[s..].iter().chain(&r[..s]).copied().collect());
        }
    }
    out
}

/// Scans rotations of the relator and its inverse for a repeated length-2
/// subword. Without one, every piece has length at most 1 and Dehn's
/// algorithm decides the word problem.
pub fn check_small_cancellation(relator: &[Letter]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for rot in relator_rotations(relator) {
        let pair = (rot[0], rot[1]);
        if !seen.insert(pair) {
            return Err(Error::SmallCancellation(format!(
                "subword {}{} occurs twice",
                pair.0.to_char(),
                pair.1.to_char()
            )));
        }
    }
    Ok(())
}

fn cyclic_slice(w: &[Letter], start: usize, len: usize) -> impl Iterator<Item = Letter> + '_ {
    (0..len).map(move |i| w[(start + i) % w.len()])
}

/// Replaces the cyclic subword `w[start..start+k]`, which equals the prefix of
/// `rot`, by the inverse of the complementary suffix of `rot`.
fn substitute(w: &[Letter], start: usize, k: usize, rot: &[Letter]) -> Vec<Letter> {
    let mut out = invert(&rot[k..]);
    out.extend(cyclic_slice(w, start + k, w.len() - k));
    cyclic_reduce(&out)
}

/// Finds an occurrence of `k` consecutive letters of a relator rotation.
fn find_relator_piece(w: &[Letter], rots: &[Vec<Letter>], k: usize) -> Vec<(usize, usize)> {
    let mut hits = Vec::new();
    if k > w.len() {
        return hits;
    }
    for start in 0..w.len() {
        for (ri, rot) in rots.iter().enumerate() {
            if cyclic_slice(w, start, k).eq(rot[..k].iter().copied()) {
                hits.push((start, ri));
            }
        }
    }
    hits
}

/// Applies Dehn reductions (subwords longer than half the relator) until none remain.
fn dehn_reduce(mut w: Vec<Letter>, rots: &[Vec<Letter>]) -> Vec<Letter> {
    let n = rots[0].len();
    'outer: loop {
        if w.is_empty() {
            return w;
        }
        for k in (n / 2 + 1..=n).rev() {
            if let Some(&(start, ri)) = find_relator_piece(&w, rots, k).first() {
                w = substitute(&w, start, k, &rots[ri]);
                continue 'outer;
            }
        }
        return w;
    }
}

pub(crate) fn canonical_one_relator(relator: &[Letter], word: &[Letter]) -> Result<Vec<Letter>> {
    let rots = relator_rotations(relator);
    let half = relator.len() / 2;
    let start = dehn_reduce(cyclic_reduce(word), &rots);
    if start.is_empty() {
        return Err(Error::TrivialClass);
    }

    // Breadth-first search over half-relator swaps. Whenever a strictly
    // shorter word turns up the search restarts from it.
    let mut best_len = start.len();
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(min_rotation_up_to_inversion(&start));
    queue.push_back(start);
    while let Some(w) = queue.pop_front() {
        if w.len() > best_len {
            continue;
        }
        for (s, ri) in find_relator_piece(&w, &rots, half) {
            let next = dehn_reduce(substitute(&w, s, half, &rots[ri]), &rots);
            if next.is_empty() {
                return Err(Error::TrivialClass);
            }
            if next.len() < best_len {
                best_len = next.len();
                seen.clear();
                queue.clear();
            }
            if next.len() == best_len && seen.len() < SWAP_SEARCH_CAP {
                let key = min_rotation_up_to_inversion(&next);
                if seen.insert(key) {
                    queue.push_back(next);
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .filter(|w| w.len() == best_len)
        .min_by(|a, b| {
            let ka: Vec<u8> = a.iter().map(|l| l.rank()).collect();
            let kb: Vec<u8> = b.iter().map(|l| l.rank()).collect();
            ka.cmp(&kb)
        })
        .expect("search keeps at least one word"))
}
