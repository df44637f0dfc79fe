//! Cantor pairing, used to encode nodes over product alphabets as nodes over ω.

/// `pair(a, b) = (a + b)(a + b + 1)/2 + b`.
pub fn pair(a: u64, b: u64) -> u64 {
    let s = a as u128 + b as u128;
    let v = s * (s + 1) / 2 + b as u128;
    u64::try_from(v).expect("pair overflows u64")
}

/// Inverse of [`pair`].
pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let mut w = (((8 * z + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let b = z - t;
    let a = w - b;
    (a as u64, b as u64)
}

/// Codes a triple as `pair(pair(a, b), c)`.
pub fn triple(a: u64, b: u64, c: u64) -> u64 {
    pair(pair(a, b), c)
}

pub fn untriple(z: u64) -> (u64, u64, u64) {
    let (ab, c) = unpair(z);
    let (a, b) = unpair(ab);
    (a, b, c)
}

/// Codes a finite tuple by iterated pairing; the empty tuple is 0 and
/// `[a, rest..]` is `1 + pair(a, code(rest))`.
pub fn tuple_code(xs: &[u64]) -> u64 {
    xs.iter().rev().fold(0, |acc, &x| 1 + pair(x, acc))
}

pub fn tuple_decode(mut z: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while z > 0 {
        let (x, rest) = unpair(z - 1);
        out.push(x);
        z = rest;
    }
    out
}
