use std::collections::HashMap;

use super::partition::check_same_n;
use super::Partition;
use crate::Result;

/// Kostka number `k_{μν}`: the number of semistandard tableaux of shape `mu`
/// and content `nu`, i.e. the multiplicity of `S^μ` in the permutation
/// module `M^ν`.
///
/// Values `1..=κ` are placed one at a time; the cells holding values `≤ i`
/// always form a partition, and each new value fills a horizontal strip of
/// length `ν_i`. Counts are memoized on `(i, current shape)`.
pub fn kostka_number(mu: &Partition, nu: &Partition) -> Result<u64> {
    check_same_n(mu, nu)?;
    let mut memo = HashMap::new();
    let empty = vec![0; mu.len()];
    Ok(count_strips(mu.parts(), nu.parts(), 0, empty, &mut memo))
}

fn count_strips(
    target: &[usize],
    content: &[usize],
    value: usize,
    shape: Vec<usize>,
    memo: &mut HashMap<(usize, Vec<usize>), u64>,
) -> u64 {
    if value == content.len() {
        return u64::from(shape == target);
    }
    if let Some(&hit) = memo.get(&(value, shape.clone())) {
        return hit;
    }
    let mut total = 0;
    let mut next = shape.clone();
    extend_strip(target, &shape, content[value], 0, &mut next, &mut |grown| {
        total += count_strips(target, content, value + 1, grown.to_vec(), memo);
    });
    memo.insert((value, shape), total);
    total
}

/// Enumerates every way to add a horizontal strip of `remaining` boxes to
/// `base` (no two in one column) while staying inside `target`.
fn extend_strip(
    target: &[usize],
    base: &[usize],
    remaining: usize,
    row: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if remaining == 0 {
        visit(current);
        return;
    }
    if row == target.len() {
        return;
    }
    // A row may grow up to the old length of the row above (horizontal strip)
    // and up to its target length.
    let cap_above = if row == 0 { usize::MAX } else { base[row - 1] };
    let max_len = target[row].min(cap_above);
    let max_add = max_len.saturating_sub(base[row]).min(remaining);
    for add in (0..=max_add).rev() {
        current[row] = base[row] + add;
        extend_strip(target, base, remaining - add, row + 1, current, visit);
    }
    current[row] = base[row];
}
