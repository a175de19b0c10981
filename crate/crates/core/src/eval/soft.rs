/// Edit distance between two character sequences (unit costs).
pub fn levenshtein(a: &[char], b: &[char]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0; b.len() + 1];
    for (i, &x) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, &y) in b.iter().enumerate() {
            let substitute = prev[j] + usize::from(x != y);
            curr[j + 1] = substitute.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

fn joined(gram: &[String]) -> Vec<char> {
    let mut chars = Vec::new();
    for (i, w) in gram.iter().enumerate() {
        if i > 0 {
            chars.push(' ');
        }
        chars.extend(w.chars());
    }
    chars
}

/// `1 - levenshtein / max length` over the n-grams joined by spaces.
pub fn ngram_similarity(a: &[String], b: &[String]) -> f64 {
    similarity_chars(&joined(a), &joined(b))
}

fn similarity_chars(a: &[char], b: &[char]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - levenshtein(a, b) as f64 / longest as f64
}

/// Fractional match mass for order `n`.
///
/// Each reference n-gram occurrence can absorb one hypothesis n-gram. Exact
/// matches are assigned first (this alone is the clipped BLEU count); every
/// remaining hypothesis n-gram, in order, takes the free reference n-gram
/// with the highest similarity at or above `threshold`, earliest on ties,
/// and earns that similarity.
pub(super) fn soft_matches(hyp: &[String], reference: &[String], n: usize, threshold: f64) -> f64 {
    if hyp.len() < n || reference.len() < n {
        return 0.0;
    }
    let hyp_grams: Vec<&[String]> = hyp.windows(n).collect();
    let ref_grams: Vec<&[String]> = reference.windows(n).collect();
    let mut used = vec![false; ref_grams.len()];
    let mut matched = vec![false; hyp_grams.len()];
    let mut mass = 0.0;

    for (hi, h) in hyp_grams.iter().enumerate() {
        if let Some(ri) = (0..ref_grams.len()).find(|&ri| !used[ri] && ref_grams[ri] == *h) {
            used[ri] = true;
            matched[hi] = true;
            mass += 1.0;
        }
    }

    let ref_chars: Vec<Vec<char>> = ref_grams.iter().map(|g| joined(g)).collect();
    for (hi, h) in hyp_grams.iter().enumerate() {
        if matched[hi] {
            continue;
        }
        let h = joined(h);
        let mut best: Option<(f64, usize)> = None;
        for (ri, r) in ref_chars.iter().enumerate() {
            if used[ri] {
                continue;
            }
            let longest = h.len().max(r.len()) as f64;
            // The length difference bounds the distance from below.
            let upper = 1.0 - h.len().abs_diff(r.len()) as f64 / longest;
            if upper < threshold || best.is_some_and(|(s, _)| upper <= s) {
                continue;
            }
            let sim = similarity_chars(&h, r);
            if sim >= threshold && best.is_none_or(|(s, _)| sim > s) {
                best = Some((sim, ri));
            }
        }
        if let Some((sim, ri)) = best {
            used[ri] = true;
            mass += sim;
        }
    }
    mass
}
