//! Precomputed defining polynomials (constant term first, monic), produced by
//! `search_modulus`. Fields missing here are searched for at runtime.

pub(super) const TABLE: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1]),
    (2, 10, &[1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (2, 11, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 12, &[1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1]),
    (2, 13, &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 14, &[1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (2, 15, &[1, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 16, &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 17, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 18, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1]),
    (2, 19, &[1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 20, &[1, 1, 0, 0, 1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 21, &[1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 22, &[1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 23, &[1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 24, &[1, 0, 0, 1, 0, 1, 0, 1, 0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 25, &[1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 26, &[1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 27, &[1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 28, &[1, 0, 1, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 29, &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 30, &[1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 31, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (2, 32, &[1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 1, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (3, 6, &[2, 1, 1, 0, 2, 0, 1]),
    (3, 7, &[1, 2, 1, 0, 0, 0, 0, 1]),
    (3, 8, &[2, 2, 1, 0, 0, 1, 0, 0, 1]),
    (3, 9, &[1, 1, 2, 2, 0, 0, 0, 0, 0, 1]),
    (3, 10, &[2, 2, 0, 0, 2, 1, 2, 0, 0, 0, 1]),
    (3, 11, &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 12, &[2, 0, 1, 1, 0, 2, 0, 0, 0, 0, 0, 0, 1]),
    (3, 13, &[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 14, &[2, 1, 2, 2, 0, 1, 1, 2, 0, 1, 0, 0, 0, 0, 1]),
    (3, 15, &[1, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]),
    (3, 16, &[2, 1, 2, 0, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 17, &[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 18, &[2, 0, 2, 0, 2, 2, 2, 0, 2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 19, &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 20, &[2, 1, 2, 2, 2, 1, 1, 1, 2, 1, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 1, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 2, 1, 0, 1]),
    (5, 5, &[3, 4, 0, 0, 0, 1]),
    (5, 6, &[2, 0, 1, 1, 1, 0, 1]),
    (5, 7, &[3, 3, 0, 0, 0, 0, 0, 1]),
    (5, 8, &[2, 1, 4, 0, 1, 0, 0, 0, 1]),
    (5, 9, &[3, 1, 0, 2, 0, 0, 0, 0, 0, 1]),
    (5, 10, &[2, 4, 4, 3, 3, 2, 0, 0, 0, 0, 1]),
    (5, 11, &[3, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (5, 12, &[2, 4, 2, 2, 4, 0, 4, 3, 0, 0, 0, 0, 1]),
    (5, 13, &[3, 3, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 1, 1]),
    (7, 3, &[4, 2, 1, 1]),
    (7, 4, &[3, 3, 3, 0, 1]),
    (7, 5, &[4, 1, 0, 0, 0, 1]),
    (7, 6, &[3, 1, 3, 2, 0, 0, 1]),
    (7, 7, &[4, 6, 0, 0, 0, 0, 0, 1]),
    (7, 8, &[3, 5, 1, 1, 2, 0, 0, 0, 1]),
    (7, 9, &[4, 6, 2, 2, 1, 0, 0, 0, 0, 1]),
    (7, 10, &[3, 4, 2, 6, 4, 6, 1, 0, 0, 0, 1]),
    (7, 11, &[4, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (11, 1, &[9, 1]),
    (11, 2, &[2, 4, 1]),
    (11, 3, &[9, 2, 0, 1]),
    (11, 4, &[2, 1, 0, 0, 1]),
    (11, 5, &[9, 3, 1, 0, 0, 1]),
    (11, 6, &[2, 4, 6, 7, 3, 0, 1]),
    (11, 7, &[9, 4, 0, 0, 0, 0, 0, 1]),
    (11, 8, &[2, 8, 10, 4, 3, 0, 0, 0, 1]),
    (11, 9, &[9, 8, 9, 0, 0, 0, 0, 0, 0, 1]),
    (13, 1, &[11, 1]),
    (13, 2, &[2, 1, 1]),
    (13, 3, &[11, 2, 0, 1]),
    (13, 4, &[2, 1, 1, 0, 1]),
    (13, 5, &[11, 4, 0, 0, 0, 1]),
    (13, 6, &[2, 2, 11, 3, 0, 0, 1]),
    (13, 7, &[11, 3, 0, 0, 0, 0, 0, 1]),
    (13, 8, &[2, 6, 9, 0, 0, 0, 0, 0, 1]),
    (17, 1, &[14, 1]),
    (17, 2, &[3, 1, 1]),
    (17, 3, &[14, 1, 0, 1]),
    (17, 4, &[3, 4, 2, 0, 1]),
    (17, 5, &[14, 1, 0, 0, 0, 1]),
    (17, 6, &[3, 14, 10, 0, 2, 0, 1]),
    (17, 7, &[14, 12, 0, 0, 0, 0, 0, 1]),
    (19, 1, &[17, 1]),
    (19, 2, &[2, 1, 1]),
    (19, 3, &[17, 4, 0, 1]),
    (19, 4, &[2, 8, 0, 0, 1]),
    (19, 5, &[17, 5, 0, 0, 0, 1]),
    (19, 6, &[2, 13, 17, 2, 0, 0, 1]),
    (19, 7, &[17, 6, 0, 0, 0, 0, 0, 1]),
    (23, 1, &[18, 1]),
    (23, 2, &[5, 2, 1]),
    (23, 3, &[18, 2, 0, 1]),
    (23, 4, &[5, 3, 0, 0, 1]),
    (23, 5, &[18, 3, 0, 0, 0, 1]),
    (23, 6, &[5, 22, 9, 14, 1, 0, 1]),
    (23, 7, &[18, 21, 0, 0, 0, 0, 0, 1]),
];

pub(super) fn lookup(p: u32, m: u32) -> Option<&'static [u32]> {
    TABLE
        .iter()
        .find(|e| e.0 == p && e.1 == m)
        .map(|e| e.2)
}
