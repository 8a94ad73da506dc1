//! Brute-force oracle shared by the integration tests. It deliberately avoids
//! the enumerator: every row is drawn from all permutations and the result is
//! filtered for the Latin property.

#![allow(dead_code)]

use looplab::table::isomorphic;
use looplab::{LoopTable, MagmaTable};

/// All normalized Latin squares of order n by brute force over row permutations.
pub fn oracle_squares(n: usize) -> Vec<LoopTable> {
    fn perms(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == items.len() {
            out.push(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            perms(items, k + 1, out);
            items.swap(k, i);
        }
    }
    if n == 1 {
        return vec![LoopTable::from_rows(&[[0usize]]).unwrap()];
    }
    // candidate rows for row r: permutations starting with r
    let rows: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|r| {
            let mut rest: Vec<usize> = (0..n).filter(|&v| v != r).collect();
            let mut out = Vec::new();
            perms(&mut rest, 0, &mut out);
            out.into_iter()
                .map(|p| std::iter::once(r).chain(p).collect())
                .collect()
        })
        .collect();
    let mut found = Vec::new();
    let mut choice = vec![0usize; n];
    'outer: loop {
        let mut table: Vec<usize> = (0..n).collect();
        for r in 1..n {
            table.extend_from_slice(&rows[r][choice[r]]);
        }
        if let Ok(m) = MagmaTable::new(n, table) {
            if let Ok(t) = LoopTable::new(m) {
                found.push(t);
            }
        }
        let mut r = n - 1;
        loop {
            choice[r] += 1;
            if choice[r] < rows[r].len() {
                continue 'outer;
            }
            choice[r] = 0;
            if r == 1 {
                break 'outer;
            }
            r -= 1;
        }
    }
    found
}

pub fn oracle_classes(n: usize) -> Result<usize, String> {
    let mut reps: Vec<LoopTable> = Vec::new();
    for t in oracle_squares(n) {
        let mut new = true;
        for r in &reps {
            if isomorphic(r, &t).map_err(|e| e.to_string())?.is_some() {
                new = false;
                break;
            }
        }
        if new {
            reps.push(t);
        }
    }
    Ok(reps.len())
}
