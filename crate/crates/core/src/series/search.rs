use std::collections::HashSet;

use serde::Serialize;

use super::SeriesError;
use crate::exact::IntMatrix;
use crate::unipotent::Word;

pub const DEFAULT_SEARCH_BUDGET: usize = 10;
const LEVEL_CAP: usize = 256;

/// Outcome of the commutator search.
///
/// Level 0 holds the nontrivial group elements given by words of length at
/// most 2. Level `i + 1` holds commutators `[a, b] = a⁻¹ b⁻¹ a b` of level-`i`
/// elements. The cost of an element is the total length of the level-0
/// words it is built from, and only commutators of cost at most `budget` are
/// formed. A nontrivial element on level `i` lies in the `i`-th derived
/// subgroup, so `lower_bound` (the number of nonempty levels) never exceeds
/// the derived length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordSearch {
    pub budget: usize,
    pub lower_bound: usize,
    pub level_sizes: Vec<usize>,
    /// A nontrivial element on the deepest level.
    pub deepest: Option<Word>,
}

#[derive(Clone)]
struct Element {
    word: Word,
    matrix: IntMatrix,
    inverse: IntMatrix,
    cost: usize,
}

fn base_level(gens: &[IntMatrix], budget: usize) -> Result<Vec<Element>, SeriesError> {
    let dim = gens.first().map_or(0, IntMatrix::dim);
    let identity = IntMatrix::identity(dim);
    let mut letters = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let inv = g.inverse_unimodular().map_err(crate::unipotent::UnipotentError::from)?;
        letters.push((Word::letter(i, false), g.clone(), inv.clone()));
        letters.push((Word::letter(i, true), inv, g.clone()));
    }
    let mut seen = HashSet::from([identity]);
    let mut level = Vec::new();
    let max_len = budget.min(2);
    if max_len >= 1 {
        for (w, m, inv) in &letters {
            if seen.insert(m.clone()) {
                level.push(Element { word: w.clone(), matrix: m.clone(), inverse: inv.clone(), cost: 1 });
            }
        }
    }
    if max_len >= 2 {
        for (w1, m1, i1) in &letters {
            for (w2, m2, i2) in &letters {
                let m = m1 * m2;
                if seen.insert(m.clone()) {
                    level.push(Element { word: w1.concat(w2), matrix: m, inverse: i2 * i1, cost: 2 });
                }
            }
        }
    }
    Ok(level)
}

/// Pairs `(i, j)` with `i < j < len`, ordered by `i + j` and then `i`, so
/// that early pairs mix many different elements.
fn diagonal_pairs(len: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..len.saturating_mul(2)).flat_map(move |s| {
        (0..=s / 2).filter_map(move |i| {
            let j = s - i;
            (i < j && j < len).then_some((i, j))
        })
    })
}

fn next_level(level: &[Element], budget: usize) -> Vec<Element> {
    let mut seen: HashSet<IntMatrix> = HashSet::new();
    let mut out = Vec::new();
    for (i, j) in diagonal_pairs(level.len()) {
        let (a, b) = (&level[i], &level[j]);
        if a.cost + b.cost > budget {
            continue;
        }
        let c = &(&(&a.inverse * &b.inverse) * &a.matrix) * &b.matrix;
        if c.is_identity() || !seen.insert(c.clone()) {
            continue;
        }
        // [a, b]⁻¹ = [b, a]
        let inverse = &(&(&b.inverse * &a.inverse) * &b.matrix) * &a.matrix;
        out.push(Element {
            word: Word::commutator(&a.word, &b.word),
            matrix: c,
            inverse,
            cost: a.cost + b.cost,
        });
        if out.len() >= LEVEL_CAP {
            break;
        }
    }
    out
}

/// Lower bound for the derived length of `⟨gens⟩` from explicit iterated
/// commutators. Deterministic: the same input always explores the same
/// words in the same order.
pub fn word_search_lower_bound(gens: &[IntMatrix], budget: usize) -> Result<WordSearch, SeriesError> {
    let mut level = base_level(gens, budget)?;
    let mut level_sizes = Vec::new();
    let mut deepest = None;
    let max_levels = gens.first().map_or(0, IntMatrix::dim) + 1;
    while !level.is_empty() && level_sizes.len() <= max_levels {
        level_sizes.push(level.len());
        deepest = Some(level[0].word.clone());
        level = next_level(&level, budget);
    }
    Ok(WordSearch {
        budget,
        lower_bound: level_sizes.len(),
        level_sizes,
        deepest,
    })
}
