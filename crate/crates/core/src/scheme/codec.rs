//! Line-oriented ASCII key and ciphertext files.
//!
//! ```text
//! SL2PKE v1 <pk|sk|ct>
//! l=<dec> lambda=<dec> n=<dec>
//! <name>=<hex>,<hex>,...      one line per matrix, row-major
//! ```
//!
//! Matrix entries are lowercase hex without leading zeros. Secret keys carry
//! `G0`, `G1` (bit strings of length `l`), `S`, `Sinv`; public keys `P0`,
//! `P1`; ciphertexts `C` and optionally `mask`. Fields appear in exactly
//! that order and the file ends with a newline.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;

use super::{Ciphertext, Params, PublicKey, SecretKey};
use crate::error::{Error, Result};
use crate::modring::{mat_mul, Modulus, ResidueMatrix};

const MAGIC: &str = "SL2PKE v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    PublicKey,
    SecretKey,
    Ciphertext,
}

impl FileKind {
    pub fn tag(self) -> &'static str {
        match self {
            FileKind::PublicKey => "pk",
            FileKind::SecretKey => "sk",
            FileKind::Ciphertext => "ct",
        }
    }

    fn fields(self) -> &'static [&'static str] {
        match self {
            FileKind::PublicKey => &["P0", "P1"],
            FileKind::SecretKey => &["G0", "G1", "S", "Sinv"],
            FileKind::Ciphertext => &["C", "mask"],
        }
    }

    /// Sniffs the kind from a file's header line.
    pub fn detect(text: &str) -> Result<FileKind> {
        let header = text.lines().next().unwrap_or("");
        match header.strip_prefix(MAGIC).map(str::trim_start) {
            Some("pk") => Ok(FileKind::PublicKey),
            Some("sk") => Ok(FileKind::SecretKey),
            Some("ct") => Ok(FileKind::Ciphertext),
            _ => Err(Error::parse(
                1,
                "header",
                format!("expected `{MAGIC} <pk|sk|ct>`"),
            )),
        }
    }
}

fn write_header(out: &mut String, kind: FileKind, params: &Params) {
    writeln!(out, "{MAGIC} {}", kind.tag()).unwrap();
    writeln!(out, "{params}").unwrap();
}

fn write_matrix(out: &mut String, name: &str, m: &ResidueMatrix) {
    out.push_str(name);
    out.push('=');
    for (i, e) in m.entries().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&e.to_str_radix(16));
    }
    out.push('\n');
}

fn write_bits(out: &mut String, name: &str, bits: &[bool]) {
    out.push_str(name);
    out.push('=');
    out.extend(bits.iter().map(|&b| if b { '1' } else { '0' }));
    out.push('\n');
}

impl SecretKey {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_header(&mut out, FileKind::SecretKey, &self.params);
        write_bits(&mut out, "G0", &self.g0);
        write_bits(&mut out, "G1", &self.g1);
        write_matrix(&mut out, "S", &self.s);
        write_matrix(&mut out, "Sinv", &self.s_inv);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = Document::parse(text, FileKind::SecretKey)?;
        let params = doc.params;
        let g0 = doc.bits(0, params.l)?;
        let g1 = doc.bits(1, params.l)?;
        if g0 == g1 {
            return Err(doc.error(1, "generator words must differ"));
        }
        let s = doc.matrix(2)?;
        let s_inv = doc.matrix(3)?;
        if !mat_mul(&s, &s_inv)?.is_identity() {
            return Err(doc.error(3, "Sinv is not the inverse of S"));
        }
        Ok(SecretKey {
            params,
            g0,
            g1,
            s,
            s_inv,
        })
    }
}

impl PublicKey {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_header(&mut out, FileKind::PublicKey, &self.params);
        write_matrix(&mut out, "P0", &self.p0);
        write_matrix(&mut out, "P1", &self.p1);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = Document::parse(text, FileKind::PublicKey)?;
        Ok(PublicKey {
            params: doc.params,
            p0: doc.matrix(0)?,
            p1: doc.matrix(1)?,
        })
    }
}

impl Ciphertext {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        write_header(&mut out, FileKind::Ciphertext, &self.params);
        write_matrix(&mut out, "C", &self.c);
        if let Some(mask) = &self.mask {
            write_bits(&mut out, "mask", mask);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = Document::parse(text, FileKind::Ciphertext)?;
        let c = doc.matrix(0)?;
        let mask = if doc.fields.len() > 1 {
            Some(doc.bits(1, doc.params.lambda)?)
        } else {
            None
        };
        Ok(Ciphertext {
            params: doc.params,
            c,
            mask,
        })
    }
}

macro_rules! from_str_via_text {
    ($($t:ty),*) => {$(
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                <$t>::from_text(s)
            }
        }
    )*};
}

from_str_via_text!(SecretKey, PublicKey, Ciphertext);

struct Field<'a> {
    line: usize,
    name: &'a str,
    value: &'a str,
}

struct Document<'a> {
    params: Params,
    modulus: Modulus,
    fields: Vec<Field<'a>>,
}

fn parse_dec(line: usize, field: &str, s: &str) -> Result<usize> {
    let canonical =
        !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) && (s == "0" || !s.starts_with('0'));
    if !canonical {
        return Err(Error::parse(
            line,
            field,
            format!("`{s}` is not a decimal number"),
        ));
    }
    s.parse()
        .map_err(|_| Error::parse(line, field, format!("`{s}` is out of range")))
}

impl<'a> Document<'a> {
    fn parse(text: &'a str, kind: FileKind) -> Result<Self> {
        let Some(body) = text.strip_suffix('\n') else {
            let last = text.lines().count().max(1);
            return Err(Error::parse(last, "eof", "missing trailing newline"));
        };
        let lines: Vec<&str> = body.split('\n').collect();

        let header = lines[0];
        let expected = format!("{MAGIC} {}", kind.tag());
        if header != expected {
            return Err(Error::parse(
                1,
                "header",
                format!("expected `{expected}`, found `{header}`"),
            ));
        }

        let Some(&param_line) = lines.get(1) else {
            return Err(Error::parse(2, "params", "missing parameter line"));
        };
        let tokens: Vec<&str> = param_line.split(' ').collect();
        let keys = ["l", "lambda", "n"];
        if tokens.len() != keys.len() {
            return Err(Error::parse(
                2,
                "params",
                "expected `l=<dec> lambda=<dec> n=<dec>`",
            ));
        }
        let mut vals = [0usize; 3];
        for ((tok, key), val) in tokens.iter().zip(keys).zip(&mut vals) {
            let raw = tok
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| {
                    Error::parse(2, key, format!("expected `{key}=<dec>`, found `{tok}`"))
                })?;
            *val = parse_dec(2, key, raw)?;
        }
        let params = Params::new(vals[0], vals[1], vals[2])
            .map_err(|e| Error::parse(2, "params", e.to_string()))?;

        let allowed = kind.fields();
        let mut fields = Vec::new();
        for (idx, raw) in lines.iter().enumerate().skip(2) {
            let line = idx + 1;
            let (name, value) = raw
                .split_once('=')
                .ok_or_else(|| Error::parse(line, *raw, "expected `<name>=<value>`"))?;
            if !allowed.contains(&name) {
                return Err(Error::parse(line, name, "unknown field"));
            }
            let want = allowed.get(fields.len()).copied().unwrap_or("end of file");
            if name != want {
                return Err(Error::parse(line, name, format!("expected `{want}` here")));
            }
            fields.push(Field { line, name, value });
        }
        // Only a ciphertext's mask is optional.
        let required = match kind {
            FileKind::Ciphertext => 1,
            _ => allowed.len(),
        };
        if fields.len() < required {
            let missing = allowed[fields.len()];
            return Err(Error::parse(lines.len() + 1, missing, "missing field"));
        }

        Ok(Document {
            params,
            modulus: params.modulus(),
            fields,
        })
    }

    fn error(&self, idx: usize, msg: &str) -> Error {
        let f = &self.fields[idx];
        Error::parse(f.line, f.name, msg)
    }

    fn bits(&self, idx: usize, len: usize) -> Result<Vec<bool>> {
        let f = &self.fields[idx];
        if f.value.len() != len {
            return Err(self.error(
                idx,
                &format!("expected {len} bits, found {}", f.value.len()),
            ));
        }
        f.value
            .bytes()
            .map(|b| match b {
                b'0' => Ok(false),
                b'1' => Ok(true),
                _ => Err(self.error(idx, "bits must be `0` or `1`")),
            })
            .collect()
    }

    fn matrix(&self, idx: usize) -> Result<ResidueMatrix> {
        let f = &self.fields[idx];
        let dim = self.params.dim();
        let parts: Vec<&str> = f.value.split(',').collect();
        if parts.len() != dim * dim {
            return Err(self.error(
                idx,
                &format!("expected {} entries, found {}", dim * dim, parts.len()),
            ));
        }
        let mut entries = Vec::with_capacity(parts.len());
        for (i, p) in parts.iter().enumerate() {
            let canonical = !p.is_empty()
                && p.bytes().all(|b| matches!(b, b'0'..=b'9' | b'a'..=b'f'))
                && (*p == "0" || !p.starts_with('0'));
            if !canonical {
                return Err(self.error(
                    idx,
                    &format!("entry {i} is not lowercase hex without leading zeros"),
                ));
            }
            let v = BigUint::parse_bytes(p.as_bytes(), 16).expect("validated hex");
            if !self.modulus.contains(&v) {
                return Err(self.error(idx, &format!("entry {i} exceeds 2^{}", self.modulus.exp())));
            }
            entries.push(v);
        }
        ResidueMatrix::from_entries(dim, entries, &self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::{encrypt, encrypt_masked, keygen};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn fixture() -> (SecretKey, PublicKey, Ciphertext) {
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let p = Params::new(3, 4, 2).unwrap();
        let (sk, pk) = keygen(&p, &mut rng);
        let ct = encrypt(&pk, &[true, false, true, true]).unwrap();
        (sk, pk, ct)
    }

    #[test]
    fn round_trips() {
        let (sk, pk, ct) = fixture();
        assert_eq!(SecretKey::from_text(&sk.to_text()).unwrap(), sk);
        assert_eq!(PublicKey::from_text(&pk.to_text()).unwrap(), pk);
        assert_eq!(Ciphertext::from_text(&ct.to_text()).unwrap(), ct);
        let mut rng = ChaCha20Rng::seed_from_u64(6);
        let masked = encrypt_masked(&pk, &[false; 4], &mut rng).unwrap();
        assert_eq!(masked.to_text().parse::<Ciphertext>().unwrap(), masked);
    }

    #[test]
    fn layout() {
        let (_, pk, _) = fixture();
        let text = pk.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "SL2PKE v1 pk");
        assert_eq!(lines[1], "l=3 lambda=4 n=2");
        assert!(lines[2].starts_with("P0="));
        assert_eq!(lines[2].split(',').count(), 16);
        assert_eq!(lines.len(), 4);
        assert_eq!(FileKind::detect(&text).unwrap(), FileKind::PublicKey);
    }

    fn parse_err(text: &str) -> (usize, String) {
        match Ciphertext::from_text(text) {
            Err(Error::Parse { line, field, .. }) => (line, field),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed() {
        let (_, _, ct) = fixture();
        let good = ct.to_text();

        assert_eq!(parse_err(good.trim_end()).1, "eof");
        assert_eq!(
            parse_err(&good.replace("SL2PKE v1 ct", "SL2PKE v2 ct")).0,
            1
        );
        assert_eq!(parse_err(&good.replace("lambda=4", "lambda=04")).0, 2);
        assert_eq!(parse_err(&good.replace("n=2", "m=2")).0, 2);
        assert_eq!(parse_err(&format!("{good}extra=1\n")), (4, "extra".into()));
        assert_eq!(parse_err(&format!("{good}C=0\n")).0, 4);
        assert_eq!(parse_err(&good.replace("C=", "C=0")).1, "C");
        assert_eq!(
            parse_err("SL2PKE v1 ct\nl=3 lambda=4 n=2\n"),
            (3, "C".into())
        );

        // Truncated entry list.
        let cut = good.rsplit_once(',').unwrap().0.to_string() + "\n";
        assert_eq!(parse_err(&cut).1, "C");

        // Value >= 2^12.
        let c_line = good.lines().nth(2).unwrap();
        let big = c_line.replacen('=', "=1000,", 1);
        let big = big.rsplit_once(',').unwrap().0.to_string();
        assert_eq!(parse_err(&good.replace(c_line, &big)).1, "C");

        // Uppercase hex.
        let upper = good.replace(c_line, &c_line.to_uppercase());
        if upper != good {
            assert!(Ciphertext::from_text(&upper).is_err());
        }
    }

    #[test]
    fn wrong_kind_rejected() {
        let (sk, pk, _) = fixture();
        assert!(PublicKey::from_text(&sk.to_text()).is_err());
        assert!(SecretKey::from_text(&pk.to_text()).is_err());
    }

    #[test]
    fn inconsistent_secret_key_rejected() {
        let (sk, _, _) = fixture();
        let mut broken = sk.clone();
        broken.s_inv = broken.s.clone();
        if !mat_mul(&broken.s, &broken.s_inv).unwrap().is_identity() {
            assert!(matches!(
                SecretKey::from_text(&broken.to_text()),
                Err(Error::Parse { .. })
            ));
        }
    }
}
