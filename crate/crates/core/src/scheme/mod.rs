//! Public-key encryption by conjugated products of `SL2(N)` generators.
//!
//! Key generation picks two distinct words `G0`, `G1` of length `l`, embeds
//! them block-diagonally into `2n x 2n` matrices and conjugates by a secret
//! `S` over `Z / 2^(l * lambda)`. A `lambda`-bit message encrypts to the
//! product of the public matrices selected by its bits (first bit leftmost).
//! Decryption undoes the conjugation, collapses the scalar blocks and runs
//! the Euclidean factorizer, which also rejects malformed ciphertexts.

mod codec;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, RngCore};

use crate::error::{Error, Reject, Result};
use crate::modring::{mat_conjugate, mat_invert, mat_mul, Modulus, ResidueMatrix};
use crate::monoid::{factor, word_to_bits, word_to_matrix, NatMatrix, Word};

pub use codec::FileKind;

/// Scheme parameters. The modulus is `2^(l * lambda)` and matrices are `2n x 2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Params {
    pub l: usize,
    pub lambda: usize,
    pub n: usize,
}

impl Params {
    pub fn new(l: usize, lambda: usize, n: usize) -> Result<Self> {
        if l == 0 || lambda == 0 || n == 0 {
            return Err(Error::usage("l, lambda and n must all be at least 1"));
        }
        match l.checked_mul(lambda) {
            Some(k) if k <= u32::MAX as usize => Ok(Params { l, lambda, n }),
            _ => Err(Error::usage("l * lambda is too large")),
        }
    }

    /// Named challenge sets `set1`, `set2`, `set3`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "set1" => Ok(Params::SET1),
            "set2" => Ok(Params::SET2),
            "set3" => Ok(Params::SET3),
            other => Err(Error::usage(format!(
                "unknown preset `{other}` (expected set1, set2 or set3)"
            ))),
        }
    }

    pub const SET1: Params = Params {
        l: 256,
        lambda: 256,
        n: 1,
    };
    pub const SET2: Params = Params {
        l: 1,
        lambda: 256,
        n: 16,
    };
    pub const SET3: Params = Params {
        l: 16,
        lambda: 256,
        n: 4,
    };

    /// `K = l * lambda`.
    pub fn modulus_bits(&self) -> u32 {
        (self.l * self.lambda) as u32
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.modulus_bits()).expect("K >= 1 by construction")
    }

    /// `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// `8 n^2 l lambda`: both public matrices.
    pub fn pk_payload_bits(&self) -> u64 {
        8 * (self.n * self.n) as u64 * self.modulus_bits() as u64
    }

    /// `4 n^2 l lambda`: one matrix.
    pub fn ct_payload_bits(&self) -> u64 {
        4 * (self.n * self.n) as u64 * self.modulus_bits() as u64
    }

    /// `4 n^2 l lambda + 2l`: `S` and both generator words. Stored secret
    /// keys additionally carry `S^-1`.
    pub fn sk_payload_bits(&self) -> u64 {
        self.ct_payload_bits() + 2 * self.l as u64
    }
}

impl std::fmt::Display for Params {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "l={} lambda={} n={}", self.l, self.lambda, self.n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    pub params: Params,
    /// Generator words as bits, `0 -> L`, `1 -> R`.
    pub g0: Vec<bool>,
    pub g1: Vec<bool>,
    pub s: ResidueMatrix,
    pub s_inv: ResidueMatrix,
}

impl SecretKey {
    pub fn g0_word(&self) -> Word {
        Word::from_bits(&self.g0)
    }

    pub fn g1_word(&self) -> Word {
        Word::from_bits(&self.g1)
    }

    /// `S * M * S^-1`, undoing the public conjugation.
    pub fn unconjugate(&self, m: &ResidueMatrix) -> Result<ResidueMatrix> {
        mat_conjugate(&self.s_inv, &self.s, m)
    }

    /// The block-embedded generator for `bit`.
    pub fn embedded_generator(&self, bit: bool) -> ResidueMatrix {
        let w = if bit { self.g1_word() } else { self.g0_word() };
        embed_block(&word_to_matrix(&w), self.params.n, &self.params.modulus())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    pub params: Params,
    pub p0: ResidueMatrix,
    pub p1: ResidueMatrix,
}

impl PublicKey {
    pub fn generator(&self, bit: bool) -> &ResidueMatrix {
        if bit {
            &self.p1
        } else {
            &self.p0
        }
    }

    /// `prod_i P_{bits[i]}` for any number of bits (identity when empty).
    pub fn product(&self, bits: &[bool]) -> ResidueMatrix {
        ordered_product(
            bits.iter()
                .map(|&b| self.generator(b))
                .collect::<Vec<_>>()
                .as_slice(),
        )
        .unwrap_or_else(|| ResidueMatrix::identity(self.params.dim(), &self.params.modulus()))
    }
}

/// Left-to-right product of a non-empty slice, split recursively so the
/// halves can run in parallel. Associativity makes the result identical to
/// a sequential fold.
fn ordered_product(ms: &[&ResidueMatrix]) -> Option<ResidueMatrix> {
    match ms.len() {
        0 => None,
        1 => Some(ms[0].clone()),
        len => {
            let (lo, hi) = ms.split_at(len / 2);
            #[cfg(feature = "parallel")]
            let (x, y) = rayon::join(|| ordered_product(lo), || ordered_product(hi));
            #[cfg(not(feature = "parallel"))]
            let (x, y) = (ordered_product(lo), ordered_product(hi));
            Some(mat_mul(&x?, &y?).expect("factors share dimension and modulus"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub params: Params,
    pub c: ResidueMatrix,
    /// Present in masked mode: the ciphertext encrypts `message XOR mask`.
    pub mask: Option<Vec<bool>>,
}

/// `[[a I_n, b I_n], [c I_n, d I_n]] mod 2^k`.
pub fn embed_block(m: &NatMatrix, n: usize, modulus: &Modulus) -> ResidueMatrix {
    let quad = [&m.a, &m.b, &m.c, &m.d];
    ResidueMatrix::from_fn(2 * n, modulus, |i, j| {
        if i % n == j % n {
            quad[2 * (i / n) + j / n].clone()
        } else {
            BigUint::zero()
        }
    })
}

/// Collapses a block-scalar `2n x 2n` matrix to its `2 x 2` matrix of scalars.
pub fn reduce_block(m: &ResidueMatrix) -> Result<ResidueMatrix> {
    let dim = m.dim();
    if !dim.is_multiple_of(2) {
        return Err(Error::usage("block reduction needs an even dimension"));
    }
    let n = dim / 2;
    for i in 0..dim {
        for j in 0..dim {
            let expected = if i % n == j % n {
                m.get(n * (i / n), n * (j / n))
            } else {
                &BigUint::ZERO
            };
            if m.get(i, j) != expected {
                return Err(Reject::BadBlock.into());
            }
        }
    }
    Ok(ResidueMatrix::from_fn(2, m.modulus(), |i, j| {
        m.get(n * i, n * j).clone()
    }))
}

/// Canonical lift of a `2 x 2` residue matrix to naturals in `[0, 2^k)`.
pub fn lift(m: &ResidueMatrix) -> NatMatrix {
    assert_eq!(m.dim(), 2, "lift expects a 2x2 matrix");
    NatMatrix::new(
        m.get(0, 0).clone(),
        m.get(0, 1).clone(),
        m.get(1, 0).clone(),
        m.get(1, 1).clone(),
    )
}

pub fn random_bits<R: RngCore + ?Sized>(len: usize, rng: &mut R) -> Vec<bool> {
    (0..len).map(|_| rng.random::<bool>()).collect()
}

/// Rejection-samples a uniform invertible matrix; also returns the number
/// of draws it took.
pub fn sample_invertible<R: RngCore + ?Sized>(
    dim: usize,
    modulus: &Modulus,
    rng: &mut R,
) -> (ResidueMatrix, u64) {
    let mut attempts = 0;
    loop {
        attempts += 1;
        let s = ResidueMatrix::random(dim, modulus, rng);
        if s.is_invertible() {
            return (s, attempts);
        }
    }
}

/// Fresh key pair with uniformly random distinct generator words.
pub fn keygen<R: RngCore + ?Sized>(params: &Params, rng: &mut R) -> (SecretKey, PublicKey) {
    let (g0, g1) = loop {
        let g0 = random_bits(params.l, rng);
        let g1 = random_bits(params.l, rng);
        if g0 != g1 {
            break (g0, g1);
        }
    };
    keygen_with_generators(params, g0, g1, rng).expect("generators are valid")
}

/// Key pair with caller-chosen generator words (e.g. exactly `L`, `R` for `l = 1`).
pub fn keygen_with_generators<R: RngCore + ?Sized>(
    params: &Params,
    g0: Vec<bool>,
    g1: Vec<bool>,
    rng: &mut R,
) -> Result<(SecretKey, PublicKey)> {
    if g0.len() != params.l || g1.len() != params.l {
        return Err(Error::usage(format!(
            "generator words must have length l = {}",
            params.l
        )));
    }
    if g0 == g1 {
        return Err(Error::usage("generator words must differ"));
    }
    let modulus = params.modulus();
    let (s, _) = sample_invertible(params.dim(), &modulus, rng);
    let s_inv = mat_invert(&s)?;
    let sk = SecretKey {
        params: *params,
        g0,
        g1,
        s,
        s_inv,
    };
    let p0 = mat_conjugate(&sk.s, &sk.s_inv, &sk.embedded_generator(false))?;
    let p1 = mat_conjugate(&sk.s, &sk.s_inv, &sk.embedded_generator(true))?;
    let pk = PublicKey {
        params: *params,
        p0,
        p1,
    };
    Ok((sk, pk))
}

fn check_message_len(params: &Params, message: &[bool]) -> Result<()> {
    if message.len() != params.lambda {
        return Err(Error::usage(format!(
            "message has {} bits, expected lambda = {}",
            message.len(),
            params.lambda
        )));
    }
    Ok(())
}

pub fn encrypt(pk: &PublicKey, message: &[bool]) -> Result<Ciphertext> {
    check_message_len(&pk.params, message)?;
    Ok(Ciphertext {
        params: pk.params,
        c: pk.product(message),
        mask: None,
    })
}

/// Encrypts `message XOR mask` and ships the mask alongside.
pub fn encrypt_with_mask(pk: &PublicKey, message: &[bool], mask: Vec<bool>) -> Result<Ciphertext> {
    check_message_len(&pk.params, message)?;
    check_message_len(&pk.params, &mask)?;
    let masked = xor_bits(message, &mask);
    Ok(Ciphertext {
        params: pk.params,
        c: pk.product(&masked),
        mask: Some(mask),
    })
}

pub fn encrypt_masked<R: RngCore + ?Sized>(
    pk: &PublicKey,
    message: &[bool],
    rng: &mut R,
) -> Result<Ciphertext> {
    let mask = random_bits(pk.params.lambda, rng);
    encrypt_with_mask(pk, message, mask)
}

pub fn decrypt(sk: &SecretKey, ct: &Ciphertext) -> Result<Vec<bool>> {
    if ct.params != sk.params {
        return Err(Error::usage(format!(
            "ciphertext parameters ({}) do not match the secret key ({})",
            ct.params, sk.params
        )));
    }
    let bits = decrypt_matrix(sk, &ct.c, sk.params.lambda)?;
    Ok(match &ct.mask {
        Some(mask) => {
            check_message_len(&sk.params, mask)?;
            xor_bits(&bits, mask)
        }
        None => bits,
    })
}

/// Decrypts a raw ciphertext matrix expected to carry exactly `num_bits`
/// generator factors. `decrypt` uses `num_bits = lambda`; other lengths let
/// callers inspect extended or truncated ciphertexts.
pub fn decrypt_matrix(sk: &SecretKey, c: &ResidueMatrix, num_bits: usize) -> Result<Vec<bool>> {
    let params = &sk.params;
    if c.dim() != params.dim() || c.modulus().exp() != params.modulus_bits() {
        return Err(Error::usage(format!(
            "ciphertext matrix is {}x{} mod 2^{}, expected {}x{} mod 2^{}",
            c.dim(),
            c.dim(),
            c.modulus().exp(),
            params.dim(),
            params.dim(),
            params.modulus_bits()
        )));
    }
    let plain = sk.unconjugate(c)?;
    let reduced = reduce_block(&plain)?;
    let word = factor(&lift(&reduced), params.l * num_bits).map_err(Reject::BadFactor)?;
    word_to_bits(&word, &sk.g0_word(), &sk.g1_word())
}

pub fn xor_bits(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// Parses a hex number into exactly `len` bits, most significant first.
pub fn bits_from_hex(hex: &str, len: usize) -> Result<Vec<bool>> {
    let digits = hex.strip_prefix("0x").unwrap_or(hex);
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(Error::usage(format!("`{hex}` is not a hex number")));
    }
    let value = BigUint::parse_bytes(digits.as_bytes(), 16).expect("validated hex");
    if value.bits() > len as u64 {
        return Err(Error::usage(format!(
            "message 0x{digits} does not fit in {len} bits"
        )));
    }
    Ok((0..len).rev().map(|i| value.bit(i as u64)).collect())
}

/// Renders bits (most significant first) as lowercase hex, zero-padded to
/// `ceil(len / 4)` digits.
pub fn bits_to_hex(bits: &[bool]) -> String {
    let mut value = BigUint::zero();
    for &b in bits {
        value <<= 1u32;
        if b {
            value += 1u32;
        }
    }
    let width = bits.len().div_ceil(4).max(1);
    format!("{:0>width$}", value.to_str_radix(16))
}
