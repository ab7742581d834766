use sl2pke_web::{evaluate_word, factor_matrix, histogram, round_trip};

#[test]
fn exhaustive_histogram_counts_every_word() {
    let h = histogram("trace", 12, 50, 0, "1").unwrap();
    assert_eq!(h.total(), 4096.0);
    assert_eq!(h.lo(), 2.0);
    assert_eq!(h.counts().len(), 50);
}

#[test]
fn sampled_histogram_is_seeded() {
    let a = histogram("supnorm", 40, 30, 2000, "abc").unwrap();
    let b = histogram("supnorm", 40, 30, 2000, "abc").unwrap();
    assert_eq!(a.counts(), b.counts());
    assert_eq!(a.total(), 2000.0);
}

#[test]
fn histogram_rejects_bad_input() {
    assert!(histogram("det", 5, 10, 0, "1").is_err());
    assert!(histogram("trace", 23, 10, 0, "1").is_err());
    assert!(histogram("trace", 10, 10, 2_000_000, "1").is_err());
    assert!(histogram("trace", 10, 10, 0, "not hex").is_err());
}

#[test]
fn round_trip_recovers_message() {
    let r = round_trip(8, 16, 2, "a7b4", "5").unwrap();
    assert_eq!(r.recovered(), "a7b4");
    assert_eq!(r.params(), "l=8 lambda=16 n=2");
    assert_eq!(r.pk_bits(), 4096.0);
    assert_eq!(r.ct_bits(), 2048.0);
    assert!(round_trip(64, 128, 1, "0", "5").is_err());
    assert!(round_trip(2, 4, 5, "0", "5").is_err());
}

#[test]
fn word_and_factor_are_inverse() {
    assert_eq!(evaluate_word("LR").unwrap(), "1 1 1 2");
    assert_eq!(factor_matrix("1", "1", "1", "2").unwrap(), "LR");
    for w in ["L", "RRRLLR", "LRLRLRLRLRLRLRLR"] {
        let m = evaluate_word(w).unwrap();
        let e: Vec<&str> = m.split(' ').collect();
        assert_eq!(factor_matrix(e[0], e[1], e[2], e[3]).unwrap(), w);
    }
    assert_eq!(factor_matrix("1", "0", "0", "1").unwrap(), "(empty word)");
    assert!(factor_matrix("2", "1", "1", "2").is_err());
    assert!(factor_matrix("-1", "0", "0", "1").is_err());
    assert!(evaluate_word("LXR").is_err());
}
