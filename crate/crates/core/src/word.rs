//! Bit-packed binary words and the Thue-Morse word operations.
//!
//! Letters are `0` and `1`, stored 64 to a block, least significant bit
//! first. Bits past `len` in the last block are always zero, so derived
//! equality and hashing compare letters only.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::error::{Error, Result};

const EVEN_BITS: u64 = 0x5555_5555_5555_5555;
const ODD_BITS: u64 = 0xAAAA_AAAA_AAAA_AAAA;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    blocks: Vec<u64>,
    len: u64,
}

/// Mask selecting the low `n` bits, `n <= 64`.
fn low_mask(n: u64) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Moves bit `k` of `x` to bit `2k`.
fn spread(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & EVEN_BITS;
    x
}

/// Image of 32 letters under 0 -> 01, 1 -> 10.
fn mu_half(x: u32) -> u64 {
    spread(x) | (spread(!x) << 1)
}

fn block_count(len: u64) -> Result<usize> {
    usize::try_from(len.div_ceil(64))
        .map_err(|_| Error::size(format!("word of {len} letters does not fit in memory")))
}

impl Word {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(letters: u64) -> Self {
        Word {
            blocks: Vec::with_capacity(block_count(letters).unwrap_or(0)),
            len: 0,
        }
    }

    /// The block `0^r`.
    pub fn zeros(r: u64) -> Self {
        Word {
            blocks: vec![0; block_count(r).expect("length overflow")],
            len: r,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut w = Word::new();
        for b in bits {
            w.push(b as u8);
        }
        w
    }

    /// Builds a word from letters given as bytes `0` and `1`.
    pub fn from_letters(letters: &[u8]) -> Result<Self> {
        let mut w = Word::with_capacity(letters.len() as u64);
        for (i, &b) in letters.iter().enumerate() {
            if b > 1 {
                return Err(Error::format(format!("letter {b} at position {i} is not 0 or 1")));
            }
            w.push(b);
        }
        Ok(w)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at `i` (0 or 1). Panics when out of bounds.
    pub fn get(&self, i: u64) -> u8 {
        assert!(i < self.len, "index {i} out of bounds for word of length {}", self.len);
        ((self.blocks[(i >> 6) as usize] >> (i & 63)) & 1) as u8
    }

    pub fn iter(&self) -> Letters<'_> {
        Letters { word: self, pos: 0 }
    }

    /// One byte per letter; the layout the repetition analysis works on.
    pub fn to_letters(&self) -> Vec<u8> {
        self.iter().collect()
    }

    pub fn push(&mut self, letter: u8) {
        debug_assert!(letter <= 1);
        self.push_bits((letter & 1) as u64, 1);
    }

    /// Appends the low `n` bits of `value`; bits above `n` must be zero.
    fn push_bits(&mut self, value: u64, n: u64) {
        debug_assert!(n <= 64 && (n == 64 || value >> n == 0));
        if n == 0 {
            return;
        }
        let off = self.len & 63;
        if off == 0 {
            self.blocks.push(value);
        } else {
            *self.blocks.last_mut().expect("non-empty") |= value << off;
            if off + n > 64 {
                self.blocks.push(value >> (64 - off));
            }
        }
        self.len += n;
    }

    /// Reads up to 64 letters starting at `pos` as a bit field.
    pub(crate) fn read_bits(&self, pos: u64, n: u64) -> u64 {
        debug_assert!(n <= 64 && pos + n <= self.len);
        if n == 0 {
            return 0;
        }
        let idx = (pos >> 6) as usize;
        let off = pos & 63;
        let mut v = self.blocks[idx] >> off;
        if off != 0 && off + n > 64 {
            v |= self.blocks[idx + 1] << (64 - off);
        }
        v & low_mask(n)
    }

    pub fn append(&mut self, other: &Word) {
        if self.len & 63 == 0 {
            self.blocks.extend_from_slice(&other.blocks);
            self.len += other.len;
            return;
        }
        let mut pos = 0;
        while pos < other.len {
            let n = (other.len - pos).min(64);
            self.push_bits(other.read_bits(pos, n), n);
            pos += n;
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Word::with_capacity(self.len + other.len);
        out.append(self);
        out.append(other);
        out
    }

    /// The factor occupying `range`. Panics if the range is out of bounds.
    pub fn subword(&self, range: Range<u64>) -> Word {
        assert!(range.start <= range.end && range.end <= self.len, "subword range out of bounds");
        let mut out = Word::with_capacity(range.end - range.start);
        let mut pos = range.start;
        while pos < range.end {
            let n = (range.end - pos).min(64);
            out.push_bits(self.read_bits(pos, n), n);
            pos += n;
        }
        out
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        if self.len > other.len {
            return false;
        }
        let full = (self.len / 64) as usize;
        if self.blocks[..full] != other.blocks[..full] {
            return false;
        }
        let rest = self.len & 63;
        rest == 0 || self.blocks[full] == other.blocks[full] & low_mask(rest)
    }

    pub fn truncate(&mut self, len: u64) {
        if len >= self.len {
            return;
        }
        self.blocks.truncate(len.div_ceil(64) as usize);
        self.len = len;
        self.clear_tail();
    }

    fn clear_tail(&mut self) {
        let rest = self.len & 63;
        if rest != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= low_mask(rest);
            }
        }
    }

    /// Letterwise `0 <-> 1`.
    pub fn complement(&self) -> Word {
        let mut out = Word {
            blocks: self.blocks.iter().map(|b| !b).collect(),
            len: self.len,
        };
        out.clear_tail();
        out
    }

    /// The Thue-Morse morphism `0 -> 01`, `1 -> 10`.
    pub fn mu(&self) -> Word {
        let mut blocks = Vec::with_capacity(self.blocks.len() * 2);
        for &b in &self.blocks {
            blocks.push(mu_half(b as u32));
            blocks.push(mu_half((b >> 32) as u32));
        }
        let mut out = Word { blocks, len: self.len * 2 };
        out.blocks.truncate(out.len.div_ceil(64) as usize);
        out.clear_tail();
        out
    }

    /// `mu` applied `s` times.
    ///
    /// Images of at least 64 letters are assembled from the two letter
    /// images `mu^s(0)` and `mu^s(1)`, each built by doubling.
    pub fn mu_pow(&self, s: u32) -> Result<Word> {
        let out_len = 1u64
            .checked_shl(s)
            .filter(|_| s < 64)
            .and_then(|scale| self.len.checked_mul(scale))
            .ok_or_else(|| {
                Error::size(format!("mu^{s} of a word of length {} overflows 64 bits", self.len))
            })?;
        block_count(out_len)?;
        if s < 6 {
            let mut w = self.clone();
            for _ in 0..s {
                w = w.mu();
            }
            return Ok(w);
        }
        let zero = Word::mu_pow_letter(0, s)?;
        let one = zero.complement();
        let mut out = Word::with_capacity(out_len);
        for letter in self.iter() {
            out.append(if letter == 0 { &zero } else { &one });
        }
        Ok(out)
    }

    /// `mu^s(letter)` by the doubling identity
    /// `mu^s(0) = mu^(s-1)(0) . complement(mu^(s-1)(0))`.
    pub fn mu_pow_letter(letter: u8, s: u32) -> Result<Word> {
        if s >= 64 {
            return Err(Error::size(format!("mu^{s} of a letter overflows 64 bits")));
        }
        block_count(1u64 << s)?;
        let mut w = Word::new();
        w.push(letter & 1);
        for _ in 0..s {
            let c = w.complement();
            w.append(&c);
        }
        Ok(w)
    }

    /// Removes the first `t` letters (the deletion operator applied `t` times).
    pub fn delete_prefix(&self, t: u64) -> Result<Word> {
        if t > self.len {
            return Err(Error::precondition(format!(
                "cannot delete {t} letters from a word of length {}",
                self.len
            )));
        }
        Ok(self.subword(t..self.len))
    }

    /// Sorted positions `i` with `w[i] = w[i+1] = 0`.
    pub fn occurrences_00(&self) -> Vec<u64> {
        let mut out = Vec::new();
        if self.len < 2 {
            return out;
        }
        let last_valid = self.len - 2;
        for (k, &cur) in self.blocks.iter().enumerate() {
            let next = self.blocks.get(k + 1).copied().unwrap_or(0);
            let shifted = (cur >> 1) | (next << 63);
            let mut hits = !cur & !shifted;
            let base = (k as u64) << 6;
            if base > last_valid {
                break;
            }
            if last_valid - base < 63 {
                hits &= low_mask(last_valid - base + 1);
            }
            while hits != 0 {
                out.push(base + hits.trailing_zeros() as u64);
                hits &= hits - 1;
            }
        }
        out
    }

    /// Whether the word is a factor of some `mu(u)`.
    ///
    /// Accepts iff for one of the two alignments every complete two-letter
    /// block is `01` or `10`; partial blocks at either end are free.
    pub fn in_language_l(&self) -> bool {
        if self.len < 3 {
            return true;
        }
        let last_valid = self.len - 2;
        let mut even_ok = true;
        let mut odd_ok = true;
        for (k, &cur) in self.blocks.iter().enumerate() {
            let base = (k as u64) << 6;
            if base > last_valid {
                break;
            }
            let next = self.blocks.get(k + 1).copied().unwrap_or(0);
            let diff = cur ^ ((cur >> 1) | (next << 63));
            let mut same = !diff;
            if last_valid - base < 63 {
                same &= low_mask(last_valid - base + 1);
            }
            even_ok &= same & EVEN_BITS == 0;
            odd_ok &= same & ODD_BITS == 0;
            if !even_ok && !odd_ok {
                return false;
            }
        }
        even_ok || odd_ok
    }

    /// Packed layout: 8-byte little-endian letter count, then letters
    /// most-significant-bit first, final byte zero-padded.
    pub fn to_packed(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8) as usize;
        let mut out = Vec::with_capacity(8 + nbytes);
        out.extend_from_slice(&self.len.to_le_bytes());
        for b in &self.blocks {
            out.extend(b.to_le_bytes().iter().map(|byte| byte.reverse_bits()));
        }
        out.truncate(8 + nbytes);
        out
    }

    pub fn from_packed(bytes: &[u8]) -> Result<Word> {
        if bytes.len() < 8 {
            return Err(Error::format("packed word shorter than its 8-byte header"));
        }
        let len = u64::from_le_bytes(bytes[..8].try_into().expect("8 bytes"));
        let body = &bytes[8..];
        if len.div_ceil(8) != body.len() as u64 {
            return Err(Error::format(format!(
                "packed header announces {len} letters but {} data bytes follow",
                body.len()
            )));
        }
        let pad = (8 - len % 8) % 8;
        if pad != 0 && body[body.len() - 1] & ((1u8 << pad) - 1) != 0 {
            return Err(Error::format("non-zero padding bits in packed word"));
        }
        let mut blocks = Vec::with_capacity(block_count(len)?);
        for chunk in body.chunks(8) {
            let mut le = [0u8; 8];
            for (dst, src) in le.iter_mut().zip(chunk) {
                *dst = src.reverse_bits();
            }
            blocks.push(u64::from_le_bytes(le));
        }
        Ok(Word { blocks, len })
    }

    /// Parses the text layout: `0`/`1` characters with at most one trailing
    /// newline.
    pub fn from_text(bytes: &[u8]) -> Result<Word> {
        let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
        let mut w = Word::with_capacity(body.len() as u64);
        for (i, &b) in body.iter().enumerate() {
            match b {
                b'0' => w.push(0),
                b'1' => w.push(1),
                _ => {
                    return Err(Error::format(format!(
                        "unexpected byte 0x{b:02x} at offset {i} in text word"
                    )))
                }
            }
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.iter().map(|b| if b == 0 { '0' } else { '1' }).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len <= 128 {
            write!(f, "Word({self})")
        } else {
            write!(f, "Word({}... len={})", self.subword(0..64), self.len)
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::from_text(s.as_bytes())
    }
}

pub struct Letters<'a> {
    word: &'a Word,
    pos: u64,
}

impl Iterator for Letters<'_> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.pos >= self.word.len {
            return None;
        }
        let b = ((self.word.blocks[(self.pos >> 6) as usize] >> (self.pos & 63)) & 1) as u8;
        self.pos += 1;
        Some(b)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.word.len - self.pos) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Letters<'_> {}

/// A morphism on `{0, 1}` given by the images of its two letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismTable {
    pub image_of_0: Word,
    pub image_of_1: Word,
}

impl MorphismTable {
    pub fn thue_morse() -> Self {
        MorphismTable {
            image_of_0: "01".parse().expect("literal"),
            image_of_1: "10".parse().expect("literal"),
        }
    }

    /// Letter-by-letter substitution.
    pub fn apply(&self, w: &Word) -> Word {
        let mut out = Word::new();
        for letter in w.iter() {
            out.append(if letter == 0 { &self.image_of_0 } else { &self.image_of_1 });
        }
        out
    }
}
