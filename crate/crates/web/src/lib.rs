//! WebAssembly bindings for the browser demo in `www/`.
//!
//! The plain functions ([`histogram`], [`round_trip`], [`evaluate_word`],
//! [`factor_matrix`]) do the work and are tested natively; the `js_*`
//! wrappers only convert errors for JavaScript.

use num_bigint::BigUint;
use wasm_bindgen::prelude::*;

use sl2pke::analysis::{self, SampleMode, Statistic};
use sl2pke::attacks::trace_leak;
use sl2pke::monoid::{factor, word_to_matrix};
use sl2pke::rng::rng_from_hex;
use sl2pke::scheme::{self, bits_from_hex, bits_to_hex};
use sl2pke::{Error, FactorReject, NatMatrix, Params, Reject, Result, Word};

/// Page-side limits; a browser tab should answer within a few seconds.
pub const MAX_EXHAUSTIVE_K: usize = 22;
pub const MAX_SAMPLES: usize = 1_000_000;
pub const MAX_MODULUS_BITS: u32 = 4096;
pub const MAX_DIM: usize = 8;
pub const MAX_WORD_LEN: usize = 100_000;

#[wasm_bindgen]
#[derive(Clone, Debug)]
pub struct HistogramData {
    lo: f64,
    hi: f64,
    counts: Vec<u32>,
    mode_bin: usize,
}

#[wasm_bindgen]
impl HistogramData {
    #[wasm_bindgen(getter)]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[wasm_bindgen(getter)]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[wasm_bindgen(getter)]
    pub fn counts(&self) -> Vec<u32> {
        self.counts.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn mode_bin(&self) -> usize {
        self.mode_bin
    }

    #[wasm_bindgen(getter)]
    pub fn total(&self) -> f64 {
        self.counts.iter().map(|&c| c as f64).sum()
    }
}

/// `samples == 0` enumerates all `2^k` words.
pub fn histogram(
    stat: &str,
    k: usize,
    bins: usize,
    samples: usize,
    seed: &str,
) -> Result<HistogramData> {
    let stat = match stat {
        "trace" => Statistic::Trace,
        "supnorm" => Statistic::SupNorm,
        other => return Err(Error::Usage(format!("unknown statistic `{other}`"))),
    };
    let mode = if samples == 0 {
        if k > MAX_EXHAUSTIVE_K {
            return Err(Error::Usage(format!(
                "the demo enumerates up to k = {MAX_EXHAUSTIVE_K}; sample instead"
            )));
        }
        SampleMode::Exhaustive
    } else {
        if samples > MAX_SAMPLES {
            return Err(Error::Usage(format!("at most {MAX_SAMPLES} samples")));
        }
        SampleMode::Sampled { samples }
    };
    let h = analysis::histogram(stat, k, bins, mode, &mut rng_from_hex(seed)?)?;
    Ok(HistogramData {
        lo: h.binning.lo as f64,
        hi: h.binning.hi as f64,
        mode_bin: h.mode_bin(),
        counts: h.counts.iter().map(|&c| c as u32).collect(),
    })
}

#[wasm_bindgen]
#[derive(Clone, Debug)]
pub struct RoundTrip {
    params: String,
    pk_bits: f64,
    ct_bits: f64,
    ciphertext_head: String,
    trace: String,
    recovered: String,
}

#[wasm_bindgen]
impl RoundTrip {
    #[wasm_bindgen(getter)]
    pub fn params(&self) -> String {
        self.params.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn pk_bits(&self) -> f64 {
        self.pk_bits
    }

    #[wasm_bindgen(getter)]
    pub fn ct_bits(&self) -> f64 {
        self.ct_bits
    }

    /// First ciphertext entry, hex.
    #[wasm_bindgen(getter)]
    pub fn ciphertext_head(&self) -> String {
        self.ciphertext_head.clone()
    }

    /// `trace(C)` in decimal, readable without the secret key.
    #[wasm_bindgen(getter)]
    pub fn trace(&self) -> String {
        self.trace.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn recovered(&self) -> String {
        self.recovered.clone()
    }
}

/// Seeded keygen, encryption and decryption of a hex message.
pub fn round_trip(
    l: usize,
    lambda: usize,
    n: usize,
    msg_hex: &str,
    seed: &str,
) -> Result<RoundTrip> {
    let params = Params::new(l, lambda, n)?;
    if params.modulus_bits() > MAX_MODULUS_BITS || params.dim() > MAX_DIM {
        return Err(Error::Usage(format!(
            "the demo allows l * lambda <= {MAX_MODULUS_BITS} and 2n <= {MAX_DIM}"
        )));
    }
    let mu = bits_from_hex(msg_hex, lambda)?;
    let (sk, pk) = scheme::keygen(&params, &mut rng_from_hex(seed)?);
    let ct = scheme::encrypt(&pk, &mu)?;
    let back = scheme::decrypt(&sk, &ct)?;
    Ok(RoundTrip {
        params: params.to_string(),
        pk_bits: params.pk_payload_bits() as f64,
        ct_bits: params.ct_payload_bits() as f64,
        ciphertext_head: ct.c.get(0, 0).to_str_radix(16),
        trace: trace_leak(&ct.c).value().to_string(),
        recovered: bits_to_hex(&back),
    })
}

/// `"a b c d"` for a word such as `"LRRL"`.
pub fn evaluate_word(word: &str) -> Result<String> {
    let w: Word = word.trim().parse()?;
    let m = word_to_matrix(&w);
    Ok(format!("{} {} {} {}", m.a, m.b, m.c, m.d))
}

/// Factors `[[a, b], [c, d]]` into a word over `L`, `R`.
pub fn factor_matrix(a: &str, b: &str, c: &str, d: &str) -> Result<String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<BigUint>()
            .map_err(|_| Error::Usage(format!("`{s}` is not a natural number")))
    };
    let m = NatMatrix::new(parse(a)?, parse(b)?, parse(c)?, parse(d)?);
    if !m.has_unit_determinant() {
        return Err(Error::Usage("determinant is not 1".into()));
    }
    // An over-long walk stops with `EarlyIdentity` at the true length.
    let w = match factor(&m, MAX_WORD_LEN + 1) {
        Err(FactorReject::EarlyIdentity { step }) => factor(&m, step).map_err(Reject::BadFactor)?,
        Err(e) => return Err(Reject::BadFactor(e).into()),
        Ok(_) => {
            return Err(Error::Usage(format!(
                "word is longer than {MAX_WORD_LEN} letters"
            )))
        }
    };
    Ok(if w.is_empty() {
        "(empty word)".into()
    } else {
        w.to_string()
    })
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen(js_name = histogram)]
pub fn js_histogram(
    stat: &str,
    k: usize,
    bins: usize,
    samples: usize,
    seed: &str,
) -> std::result::Result<HistogramData, JsError> {
    histogram(stat, k, bins, samples, seed).map_err(js)
}

#[wasm_bindgen(js_name = roundTrip)]
pub fn js_round_trip(
    l: usize,
    lambda: usize,
    n: usize,
    msg_hex: &str,
    seed: &str,
) -> std::result::Result<RoundTrip, JsError> {
    round_trip(l, lambda, n, msg_hex, seed).map_err(js)
}

#[wasm_bindgen(js_name = evaluateWord)]
pub fn js_evaluate_word(word: &str) -> std::result::Result<String, JsError> {
    evaluate_word(word).map_err(js)
}

#[wasm_bindgen(js_name = factorMatrix)]
pub fn js_factor_matrix(
    a: &str,
    b: &str,
    c: &str,
    d: &str,
) -> std::result::Result<String, JsError> {
    factor_matrix(a, b, c, d).map_err(js)
}
