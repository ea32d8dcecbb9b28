//! Words in the generators, indexed lexicographically.
//!
//! A word `v_1 … v_n` of length `n` over `g` letters has index
//! `Σ v_k g^{n-k}`, so index order is the lexicographic order and
//! concatenation is `u * g^{|v|} + v`.

pub fn pow(g: usize, n: usize) -> usize {
    g.checked_pow(n as u32).expect("tensor power dimension overflows usize")
}

pub fn index(letters: &[usize], g: usize) -> usize {
    letters.iter().fold(0, |acc, &v| {
        debug_assert!(v < g);
        acc * g + v
    })
}

pub fn letters(mut idx: usize, n: usize, g: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % g;
        idx /= g;
    }
    out
}

pub fn concat(u: usize, v: usize, len_v: usize, g: usize) -> usize {
    u * pow(g, len_v) + v
}

/// Splits a word of length `n` into a prefix of length `l`, a middle, and a
/// suffix of length `r`.
pub fn split3(w: usize, n: usize, l: usize, r: usize, g: usize) -> (usize, usize, usize) {
    debug_assert!(l + r <= n);
    let gr = pow(g, r);
    let u = w % gr;
    let rest = w / gr;
    let gm = pow(g, n - l - r);
    (rest / gm, rest % gm, u)
}

pub fn render(idx: usize, n: usize, names: &[String]) -> String {
    if n == 0 {
        return "1".to_string();
    }
    letters(idx, n, names.len())
        .iter()
        .map(|&v| names[v].as_str())
        .collect::<Vec<_>>()
        .join("*")
}
