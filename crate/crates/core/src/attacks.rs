//! Attacks on weak variants of the scheme.
//!
//! With `n = 1` and generators exactly `L`, `R`, the public matrices are
//!
//! ```text
//! S^-1 L S = 1/δ [[δ - ab, -b²], [a², δ + ab]]
//! S^-1 R S = 1/δ [[δ + cd,  d²], [-c², δ - cd]]      S = [[a, b], [c, d]], δ = ad - bc
//! ```
//!
//! Conjugation is blind to scaling `S` by a unit, so one odd entry of the
//! first column can be fixed to 1. The remaining unknowns then follow from
//! linear entries except one, which is a square root modulo `2^k`.

use num_bigint::BigUint;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::modring::{
    mat_conjugate, mat_invert, mat_mul, sqrt_mod_pow2, Modulus, Residue, ResidueMatrix,
};
use crate::monoid::Letter;
use crate::scheme::{encrypt, encrypt_masked, random_bits, Ciphertext, PublicKey};

/// Which entry of `S` the candidate has pinned to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    A,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredConjugator {
    pub s: ResidueMatrix,
    pub normalization: Normalization,
    /// `S^-1 L S = P0` and `S^-1 R S = P1` were re-checked by multiplication.
    pub verified: bool,
}

fn generator_residue(x: Letter, modulus: &Modulus) -> ResidueMatrix {
    let m = x.matrix();
    ResidueMatrix::from_fn(2, modulus, |i, j| {
        [&m.a, &m.b, &m.c, &m.d][2 * i + j].clone()
    })
}

/// True iff `S^-1 L S = P0` and `S^-1 R S = P1`.
pub fn verify_conjugator(s: &ResidueMatrix, p0: &ResidueMatrix, p1: &ResidueMatrix) -> bool {
    let Ok(s_inv) = mat_invert(s) else {
        return false;
    };
    let md = s.modulus();
    let conj = |x| mat_conjugate(s, &s_inv, &generator_residue(x, md)).ok();
    conj(Letter::L).as_ref() == Some(p0) && conj(Letter::R).as_ref() == Some(p1)
}

/// Recovers a conjugator for a first-attempt public key (`n = 1`, `G0 = L`,
/// `G1 = R`). Every returned candidate is verified; `S` itself is only
/// determined up to a unit scalar.
pub fn recover_conjugator_n1(
    p0: &ResidueMatrix,
    p1: &ResidueMatrix,
) -> Result<Vec<RecoveredConjugator>> {
    if p0.dim() != 2 || p1.dim() != 2 || p0.modulus() != p1.modulus() {
        return Err(Error::usage(
            "the n = 1 attack needs two 2x2 public matrices over the same modulus",
        ));
    }
    let md = p0.modulus().clone();
    let k = md.exp();
    let one = BigUint::from(1u32);
    let odd = |x: &BigUint| x.bit(0);
    let roots = |x: &BigUint| sqrt_mod_pow2(x, k).unwrap_or_default();

    let mut candidates: Vec<(Normalization, [BigUint; 4])> = Vec::new();

    // a = 1: P0[1][0] = 1/δ.
    if odd(p0.get(1, 0)) {
        let delta = md.inv(p0.get(1, 0)).expect("odd");
        let b = md.mul(&delta, &md.sub(&one, p0.get(0, 0)));
        let cd = md.mul(&delta, &md.sub(p1.get(0, 0), &one));
        if odd(p1.get(0, 1)) {
            for d in roots(&md.mul(&delta, p1.get(0, 1))) {
                let c = md.mul(&cd, &md.inv(&d).expect("root of a unit"));
                candidates.push((Normalization::A, [one.clone(), b.clone(), c, d]));
            }
        }
        if odd(p1.get(1, 0)) {
            for c in roots(&md.neg(&md.mul(&delta, p1.get(1, 0)))) {
                let d = md.mul(&cd, &md.inv(&c).expect("root of a unit"));
                candidates.push((Normalization::A, [one.clone(), b.clone(), c, d]));
            }
        }
    }

    // c = 1: P1[1][0] = -1/δ.
    if odd(p1.get(1, 0)) {
        let delta = md.neg(&md.inv(p1.get(1, 0)).expect("odd"));
        let d = md.mul(&delta, &md.sub(p1.get(0, 0), &one));
        let ab = md.mul(&delta, &md.sub(&one, p0.get(0, 0)));
        if odd(p0.get(1, 0)) {
            for a in roots(&md.mul(&delta, p0.get(1, 0))) {
                let b = md.mul(&ab, &md.inv(&a).expect("root of a unit"));
                candidates.push((Normalization::C, [a, b, one.clone(), d.clone()]));
            }
        }
        if odd(p0.get(0, 1)) {
            for b in roots(&md.neg(&md.mul(&delta, p0.get(0, 1)))) {
                let a = md.mul(&ab, &md.inv(&b).expect("root of a unit"));
                candidates.push((Normalization::C, [a, b, one.clone(), d.clone()]));
            }
        }
    }

    let mut found: Vec<RecoveredConjugator> = Vec::new();
    for (normalization, e) in candidates {
        let s = ResidueMatrix::from_entries(2, e.to_vec(), &md)?;
        if found.iter().any(|f| f.s == s) {
            continue;
        }
        if verify_conjugator(&s, p0, p1) {
            found.push(RecoveredConjugator {
                s,
                normalization,
                verified: true,
            });
        }
    }
    if found.is_empty() {
        Err(Error::NoSolution)
    } else {
        Ok(found)
    }
}

/// `trace(C) mod 2^k`. Conjugation preserves it, so for an honest
/// ciphertext it equals `n * trace(G_{μ_0} ... G_{μ_{λ-1}}) mod 2^k`.
pub fn trace_leak(c: &ResidueMatrix) -> Residue {
    c.trace()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Guess {
    Zero,
    One,
    Unknown,
}

/// Re-encrypts both candidates and reports which one reproduces `ct`.
pub fn distinguish_deterministic(
    pk: &PublicKey,
    ct: &Ciphertext,
    mu0: &[bool],
    mu1: &[bool],
) -> Result<Guess> {
    Ok(if encrypt(pk, mu0)?.c == ct.c {
        Guess::Zero
    } else if encrypt(pk, mu1)?.c == ct.c {
        Guess::One
    } else {
        Guess::Unknown
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameOutcome {
    pub trials: u64,
    pub wins: u64,
    /// Trials where the distinguisher had no answer and fell back to a coin flip.
    pub unknown: u64,
}

impl GameOutcome {
    pub fn win_rate(&self) -> f64 {
        self.wins as f64 / self.trials as f64
    }
}

/// Two-message indistinguishability game against [`distinguish_deterministic`].
///
/// Each trial draws fresh distinct `mu0`, `mu1` and a challenge bit, encrypts the
/// chosen message (masked if requested) and lets the distinguisher guess;
/// an `Unknown` answer becomes a uniformly random guess.
pub fn play_distinguishing_game<R: RngCore + ?Sized>(
    pk: &PublicKey,
    trials: u64,
    masked: bool,
    rng: &mut R,
) -> Result<GameOutcome> {
    let lambda = pk.params.lambda;
    let mut out = GameOutcome {
        trials,
        wins: 0,
        unknown: 0,
    };
    for _ in 0..trials {
        let mu0 = random_bits(lambda, rng);
        let mu1 = loop {
            let m = random_bits(lambda, rng);
            if m != mu0 || lambda == 0 {
                break m;
            }
        };
        let challenge: bool = rng.random();
        let mu = if challenge { &mu1 } else { &mu0 };
        let ct = if masked {
            encrypt_masked(pk, mu, rng)?
        } else {
            encrypt(pk, mu)?
        };
        let guess = match distinguish_deterministic(pk, &ct, &mu0, &mu1)? {
            Guess::Zero => false,
            Guess::One => true,
            Guess::Unknown => {
                out.unknown += 1;
                rng.random()
            }
        };
        if guess == challenge {
            out.wins += 1;
        }
    }
    Ok(out)
}

/// `C * P_bit`: a valid encryption of `μ ‖ bit` for a receiver expecting one more bit.
pub fn extend_ciphertext(pk: &PublicKey, ct: &Ciphertext, bit: bool) -> Result<Ciphertext> {
    Ok(Ciphertext {
        params: ct.params,
        c: mat_mul(&ct.c, pk.generator(bit))?,
        mask: ct.mask.clone(),
    })
}

/// `C * P_guess^-1`: drops the last factor if the guess is right.
pub fn strip_last_bit(pk: &PublicKey, ct: &Ciphertext, guess: bool) -> Result<Ciphertext> {
    let inv = mat_invert(pk.generator(guess))?;
    Ok(Ciphertext {
        params: ct.params,
        c: mat_mul(&ct.c, &inv)?,
        mask: ct.mask.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{decrypt_matrix, keygen_with_generators, Params};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn identity_conjugator() {
        let md = Modulus::new(64).unwrap();
        let l = generator_residue(Letter::L, &md);
        let r = generator_residue(Letter::R, &md);
        let found = recover_conjugator_n1(&l, &r).unwrap();
        assert!(!found.is_empty());
        assert!(found
            .iter()
            .all(|f| f.verified && verify_conjugator(&f.s, &l, &r)));
        assert!(found.iter().any(|f| f.s.is_identity()));
    }

    #[test]
    fn identity_public_key_has_no_solution() {
        let id = ResidueMatrix::identity(2, &Modulus::new(64).unwrap());
        assert!(matches!(
            recover_conjugator_n1(&id, &id),
            Err(Error::NoSolution)
        ));
    }

    #[test]
    fn random_first_attempt_keys() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let p = Params::new(1, 64, 1).unwrap();
        for _ in 0..25 {
            let (_, pk) = keygen_with_generators(&p, vec![false], vec![true], &mut rng).unwrap();
            let found = recover_conjugator_n1(&pk.p0, &pk.p1).unwrap();
            assert!(found
                .iter()
                .all(|f| verify_conjugator(&f.s, &pk.p0, &pk.p1)));
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        let md = Modulus::new(8).unwrap();
        let big = ResidueMatrix::identity(4, &md);
        assert!(matches!(
            recover_conjugator_n1(&big, &big),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn malleability() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        let p = Params::new(4, 8, 2).unwrap();
        let (sk, pk) = crate::scheme::keygen(&p, &mut rng);
        let mu = random_bits(8, &mut rng);
        let ct = encrypt(&pk, &mu).unwrap();

        let ext = extend_ciphertext(&pk, &ct, true).unwrap();
        let mut longer = mu.clone();
        longer.push(true);
        assert_eq!(decrypt_matrix(&sk, &ext.c, 9).unwrap(), longer);
        assert!(decrypt_matrix(&sk, &ext.c, 8).is_err());
        assert_eq!(strip_last_bit(&pk, &ext, true).unwrap(), ct);

        let last = *mu.last().unwrap();
        let stripped = strip_last_bit(&pk, &ct, last).unwrap();
        assert_eq!(decrypt_matrix(&sk, &stripped.c, 7).unwrap(), mu[..7]);
        let wrong = strip_last_bit(&pk, &ct, !last).unwrap();
        assert!(decrypt_matrix(&sk, &wrong.c, 7).is_err());
    }

    #[test]
    fn distinguisher() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let p = Params::new(2, 8, 1).unwrap();
        let (_, pk) = crate::scheme::keygen(&p, &mut rng);
        let (mu0, mu1) = (random_bits(8, &mut rng), random_bits(8, &mut rng));
        if mu0 != mu1 {
            let c0 = encrypt(&pk, &mu0).unwrap();
            let c1 = encrypt(&pk, &mu1).unwrap();
            assert_eq!(
                distinguish_deterministic(&pk, &c0, &mu0, &mu1).unwrap(),
                Guess::Zero
            );
            assert_eq!(
                distinguish_deterministic(&pk, &c1, &mu0, &mu1).unwrap(),
                Guess::One
            );
        }
        let plain = play_distinguishing_game(&pk, 50, false, &mut rng).unwrap();
        assert_eq!(plain.wins, 50);
    }

    #[test]
    fn trace_leak_identity() {
        let md = Modulus::new(16).unwrap();
        let id = ResidueMatrix::identity(6, &md);
        assert_eq!(trace_leak(&id).value(), &BigUint::from(6u32));
    }
}
