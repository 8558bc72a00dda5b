//! Conway polynomials for every non-prime field order up to 256.
//!
//! Coefficients are little-endian (constant term first) and monic. The
//! entries are the standard Conway polynomials, so the class of `x` is a
//! primitive element in each of these fields.

const TABLE: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

pub(crate) fn lookup(p: u32, h: u32) -> Option<&'static [u32]> {
    TABLE.iter().find(|(tp, th, _)| *tp == p && *th == h).map(|(_, _, poly)| *poly)
}

pub(crate) fn entries() -> impl Iterator<Item = (u32, u32, &'static [u32])> {
    TABLE.iter().copied()
}
