#![allow(dead_code)]

use std::io::Write;

use paradecomp::config::{
    generate_equations, ConfigurationSet, EquationId, Orientation, Selection, Subsystem,
};

/// Writes straight to the process stderr so the line survives output capture.
pub fn verdict(criterion: usize, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "acceptance criterion {criterion}: {status} {detail}"
    );
}

pub fn sel(block: usize, j: usize, k: usize, orientation: Orientation, multiplicity: usize) -> Selection {
    Selection {
        equation: EquationId { block, j, k },
        orientation,
        multiplicity,
    }
}

/// Five configurations of three generators over three blocks.
pub fn five_configs() -> ConfigurationSet {
    ConfigurationSet::from_tuples(
        3,
        3,
        &[&[1, 2, 3, 2], &[1, 3, 1, 3], &[2, 1, 2, 2], &[3, 3, 1, 2], &[3, 3, 2, 1]],
    )
    .unwrap()
}

/// Seven-row subsystem of the five-configuration system whose rows
/// reproduce the printed `A` and `B`.
pub fn five_config_selections() -> Vec<Selection> {
    use Orientation::*;
    vec![
        sel(1, 0, 1, AsIs, 2),
        sel(1, 1, 3, AsIs, 2),
        sel(2, 0, 2, Swapped, 1),
        sel(2, 1, 2, Swapped, 1),
        sel(3, 0, 3, AsIs, 1),
    ]
}

pub fn five_config_subsystem() -> Subsystem {
    Subsystem::new(&generate_equations(&five_configs()), five_config_selections()).unwrap()
}

pub const PRINTED_A: [[u8; 5]; 7] = [
    [0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1],
    [0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
];

pub const PRINTED_B: [[u8; 5]; 7] = [
    [1, 1, 0, 0, 0],
    [1, 1, 0, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 1, 0, 1],
    [0, 0, 1, 0, 1],
    [0, 0, 0, 1, 1],
];

pub const PRINTED_CERTIFICATE: [[i64; 5]; 7] = [
    [1, 0, -1, 0, 0],
    [1, 0, -1, 1, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 1, 1],
    [0, 0, 1, 1, 1],
    [0, 0, 1, 1, 1],
    [1, 1, 0, 1, 1],
];

/// Image list of the printed order `(2 7)(4 6)`.
pub const PRINTED_PI: [usize; 7] = [1, 7, 3, 6, 5, 4, 2];

/// The four printed 9×5 coefficient blocks of the five-configuration system.
pub const PRINTED_BLOCKS: [[[i64; 5]; 9]; 4] = [
    [
        [-1, -1, 1, 0, 0],
        [-1, 0, 0, 1, 0],
        [-1, -1, 0, 0, 1],
        [1, 0, -1, 0, 0],
        [0, 0, 0, 0, 1],
        [1, 0, 0, 1, 0],
        [0, 1, 0, 0, 0],
        [1, 0, 0, -1, -1],
        [0, 1, 0, -1, -1],
    ],
    [
        [0, -1, 1, -1, 0],
        [0, 0, 1, 0, -1],
        [0, 1, 0, 1, -1],
        [1, 0, -1, 0, -1],
        [0, 0, -1, -1, 0],
        [-1, 0, 0, -1, 1],
        [-1, 1, 0, 1, 1],
        [0, 0, 0, 1, 1],
        [1, -1, 0, 0, 0],
    ],
    [
        [1, 1, -1, 0, 0],
        [1, 0, 0, -1, 0],
        [1, 1, 0, 0, -1],
        [-1, 0, 1, 0, 0],
        [0, 0, 0, 0, -1],
        [-1, 0, 0, -1, 0],
        [0, -1, 0, 0, 0],
        [-1, 0, 0, 1, 1],
        [0, -1, 0, 1, 1],
    ],
    [
        [0, 1, -1, 1, 0],
        [0, 0, -1, 0, 1],
        [0, -1, 0, -1, 1],
        [-1, 0, 1, 0, 1],
        [0, 0, 1, 1, 0],
        [1, 0, 0, 1, -1],
        [1, -1, 0, -1, -1],
        [0, 0, 0, -1, -1],
        [-1, 1, 0, 0, 0],
    ],
];

/// Three configurations of three generators over two blocks.
pub fn three_configs() -> ConfigurationSet {
    ConfigurationSet::from_tuples(3, 2, &[&[1, 2, 2, 2], &[2, 1, 2, 1], &[2, 2, 1, 1]]).unwrap()
}

/// Seven rows: the block-2 atom of `C1` feeds `C2, C3`; each of those feeds back into `C1`.
pub fn three_config_subsystem() -> Subsystem {
    use Orientation::*;
    Subsystem::new(
        &generate_equations(&three_configs()),
        vec![sel(2, 0, 3, AsIs, 3), sel(1, 0, 1, AsIs, 2), sel(1, 0, 2, AsIs, 2)],
    )
    .unwrap()
}

pub fn rows_u8<const C: usize>(rows: &[[u8; C]]) -> Vec<Vec<u8>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

/// Every ordering of `0..n`, lexicographic.
pub fn all_orders(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Direct evaluation of the certificate rows for a row order, independent
/// of the library: row `t` is the running sum of `B − A` over the first
/// `t + 1` rows minus the `A`-row that comes next (cyclically).
pub fn certificate_rows(a: &[Vec<i64>], b: &[Vec<i64>], order: &[usize]) -> Vec<Vec<i64>> {
    let cols = a[0].len();
    let n = order.len();
    let mut running = vec![0i64; cols];
    let mut out = Vec::with_capacity(n);
    for t in 0..n {
        let r = order[t];
        for c in 0..cols {
            running[c] += b[r][c] - a[r][c];
        }
        let next = order[(t + 1) % n];
        out.push((0..cols).map(|c| running[c] - a[next][c]).collect());
    }
    out
}

/// Unpruned normality test over all `n!` orders.
pub fn brute_force_normal(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    let cols = a[0].len();
    let positive = (0..cols).all(|c| (0..a.len()).map(|r| b[r][c] - a[r][c]).sum::<i64>() > 0);
    positive
        && all_orders(a.len())
            .iter()
            .any(|o| certificate_rows(a, b, o).iter().flatten().all(|&v| v >= -1))
}
