use super::*;
use crate::tables::{mixed_rows, nonneg_rows};

fn pn(n: u32) -> PIndex {
    PIndex::new(n).unwrap()
}

fn triples(reps: &[Representation]) -> Vec<Vec<i128>> {
    reps.iter()
        .map(|r| {
            r.terms()
                .iter()
                .map(|t| i128::try_from(t).unwrap())
                .collect()
        })
        .collect()
}

/// Every triple with `0 <= x <= y <= z`, by walking `x` and `y`.
fn brute_nonneg(target: i128) -> Vec<Vec<i128>> {
    let mut out = Vec::new();
    let mut x = 0i128;
    while 3 * x.pow(3) <= target {
        let mut y = x;
        while x.pow(3) + 2 * y.pow(3) <= target {
            let rest = target - x.pow(3) - y.pow(3);
            let z = (rest as f64).cbrt().round() as i128;
            for z in [z - 1, z, z + 1] {
                if z >= y && z.pow(3) == rest {
                    out.push(vec![x, y, z]);
                }
            }
            y += 1;
        }
        x += 1;
    }
    out
}

#[test]
fn small_indices_match_brute_force() {
    for n in 1..=16 {
        let got = search(pn(n), &SearchConfig::default()).unwrap();
        assert!(got.complete);
        let target = i128::try_from(&BigInt::from(p_value(pn(n)))).unwrap();
        assert_eq!(triples(&got.reps), brute_nonneg(target), "n = {n}");
    }
}

#[test]
fn filter_does_not_change_the_answer() {
    for n in [5, 8, 9, 10, 14, 18] {
        let on = search(pn(n), &SearchConfig::default()).unwrap();
        let off = search(
            pn(n),
            &SearchConfig {
                residue_filter: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(on.reps, off.reps, "n = {n}");
        assert_eq!(on.byproducts, off.byproducts, "n = {n}");
        // Only P_n = 3, 6 (mod 9) leaves anything to filter.
        let active = matches!(crate::mersenne::p_mod9(pn(n)), 3 | 6);
        assert_eq!(on.stats.x_filtered > 0, active, "n = {n}");
        assert_eq!(off.stats.x_filtered, 0);
    }
}

#[test]
fn table_rows_are_rediscovered() {
    let rows = nonneg_rows().unwrap();
    for n in [5, 7, 9, 11, 13, 15, 17, 18] {
        let got = search(pn(n), &SearchConfig::default()).unwrap();
        let mut want: Vec<Vec<i128>> = rows
            .iter()
            .filter(|r| r.n == n)
            .map(|r| {
                let mut t: Vec<i128> = r.terms.iter().map(|v| i128::try_from(v).unwrap()).collect();
                t.sort();
                t
            })
            .collect();
        want.sort();
        assert_eq!(triples(&got.reps), want, "n = {n}");
    }
}

#[test]
fn mixed_mode_finds_table_rows() {
    for row in mixed_rows().unwrap().iter().filter(|r| r.n <= 16) {
        let mut t: Vec<i128> = row
            .terms
            .iter()
            .map(|v| i128::try_from(v).unwrap())
            .collect();
        t.sort();
        let max_abs = t.iter().map(|v| v.unsigned_abs()).max().unwrap() as u64;
        let cfg = SearchConfig {
            mode: Mode::Mixed,
            x_max: Some(max_abs.max(1)),
            ..Default::default()
        };
        let got = search(pn(row.n), &cfg).unwrap();
        assert!(triples(&got.reps).contains(&t), "n = {}: {:?}", row.n, t);
        assert!(got.byproducts.is_empty());
    }
}

#[test]
fn shards_and_chunks_do_not_matter() {
    let base = search(pn(17), &SearchConfig::default()).unwrap();
    for (shards, chunk) in [(1, 1), (4, 7), (8, 4096), (3, 100_000)] {
        let got = search(
            pn(17),
            &SearchConfig {
                shards,
                chunk_size: chunk,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(got.reps, base.reps);
        assert_eq!(got.byproducts, base.byproducts);
        assert_eq!(got.stats, base.stats);
    }
}

#[test]
fn scaled_search_lifts() {
    let t = scaled_target(pn(43), 4).unwrap();
    assert_eq!((t.a, t.lift), (0, 10));
    assert!(scaled_target(pn(43), 15).is_err());
    assert_eq!(scaled_target(pn(44), 0).unwrap().a, 1);
    let cfg = SearchConfig {
        x_max: Some(16),
        ..Default::default()
    };
    let got = search_scaled(pn(43), 4, &cfg).unwrap();
    let want: Vec<BigInt> = [16u64, 260_080, 264_176]
        .iter()
        .map(|&v| BigInt::from(v) << 10)
        .collect();
    assert!(got.reps.iter().any(|r| r.terms() == want.as_slice()));
    assert!(got.reps.iter().all(|r| r.verify()));
    assert_eq!(got.scale_k, Some(4));
}

#[test]
fn big_target_path() {
    // 2^129 + 8 = 2^3 + 0^3 + (2^43)^3, above the machine-word limit.
    let target = (BigUint::one() << 129usize) + 8u32;
    let cfg = SearchConfig {
        x_max: Some(3),
        ..Default::default()
    };
    let got = search_number(&target, &cfg).unwrap();
    let want = [
        BigInt::from(0),
        BigInt::from(2),
        BigInt::from(BigUint::one() << 43usize),
    ];
    assert!(got.nonneg.contains(&want), "{:?}", got.nonneg);
}

#[test]
fn config_errors() {
    let bad = |cfg: SearchConfig| search(pn(9), &cfg).unwrap_err();
    assert!(matches!(
        bad(SearchConfig {
            shards: 0,
            ..Default::default()
        }),
        Error::InvalidConfig(_)
    ));
    assert!(matches!(
        bad(SearchConfig {
            x_min: Some(10),
            x_max: Some(3),
            ..Default::default()
        }),
        Error::InvalidConfig(_)
    ));
}

#[test]
fn interrupt_and_resume() {
    let dir = std::env::temp_dir().join(format!("cubesum-ckpt-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("n18.jsonl");
    let _ = std::fs::remove_file(&path);
    let cfg = SearchConfig {
        chunk_size: 64,
        checkpoint_path: Some(path.clone()),
        ..Default::default()
    };
    let full = search(
        pn(18),
        &SearchConfig {
            chunk_size: 64,
            ..Default::default()
        },
    )
    .unwrap();

    let err = search(
        pn(18),
        &SearchConfig {
            stop_after_chunks: Some(5),
            ..cfg.clone()
        },
    )
    .unwrap_err();
    assert!(
        matches!(err, Error::Interrupted { completed: 5, .. }),
        "{err:?}"
    );

    // A torn line from a crash mid-write is dropped.
    let mut text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 5);
    text.push_str("{\"version\":1,\"n\":18");
    std::fs::write(&path, &text).unwrap();

    let resumed = search(
        pn(18),
        &SearchConfig {
            shards: 4,
            ..cfg.clone()
        },
    )
    .unwrap();
    assert_eq!(resumed.reps, full.reps);
    assert_eq!(resumed.stats, full.stats);

    // A different configuration refuses the file.
    let other = SearchConfig {
        chunk_size: 32,
        ..cfg
    };
    assert!(matches!(
        search(pn(18), &other).unwrap_err(),
        Error::Checkpoint(_)
    ));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn timeouts_mark_incomplete() {
    let cfg = SearchConfig {
        factor: FactorOptions {
            rho_attempts: 1,
            rho_iterations: 1,
            ..Default::default()
        },
        residue_filter: false,
        ..Default::default()
    };
    let got = search(
        pn(40),
        &SearchConfig {
            x_max: Some(200),
            ..cfg
        },
    )
    .unwrap();
    assert!(!got.complete);
    assert_eq!(got.stats.factor_timeouts as usize, got.incomplete_x.len());
}
