//! Palindromic binary codes for north glues.
//!
//! Each north glue gets an index (null glue first at 0, the rest sorted by
//! label) and the code formed by concatenating the index's b-bit binary
//! representation with its mirror image. Reading the code in either direction
//! yields the same value, which is what lets rows growing in opposite
//! directions share one geometric encoding.

use std::collections::BTreeMap;

use crate::tile::Glue;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueCode {
    pub glue: Glue,
    pub index: usize,
    /// Palindrome of length 2b, most significant half first.
    pub bits: Vec<bool>,
}

impl GlueCode {
    pub fn code_string(&self) -> String {
        self.bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
    }
}

/// Code table for a set of north glues.
#[derive(Clone, Debug)]
pub struct CodeTable {
    /// Half-length b = ceil(log2(count + 1)), at least 1.
    pub half_bits: usize,
    codes: Vec<GlueCode>,
    by_glue: BTreeMap<Glue, usize>,
}

impl CodeTable {
    /// Assign palindromic codes to the given glues (the null glue is always
    /// index 0 and need not be listed).
    pub fn assign(north_glues: &[Glue]) -> CodeTable {
        let mut glues: Vec<Glue> = north_glues
            .iter()
            .filter(|g| !g.is_null())
            .cloned()
            .collect();
        glues.sort();
        glues.dedup();
        let count = glues.len();
        let half_bits = bits_needed(count + 1).max(1);
        let mut codes = Vec::with_capacity(count + 1);
        let mut by_glue = BTreeMap::new();
        for (index, glue) in std::iter::once(Glue::null())
            .chain(glues.into_iter())
            .enumerate()
        {
            let mut half: Vec<bool> = (0..half_bits)
                .rev()
                .map(|i| (index >> i) & 1 == 1)
                .collect();
            let mut bits = half.clone();
            half.reverse();
            bits.extend(half);
            by_glue.insert(glue.clone(), index);
            codes.push(GlueCode { glue, index, bits });
        }
        CodeTable {
            half_bits,
            codes,
            by_glue,
        }
    }

    pub fn code_len(&self) -> usize {
        2 * self.half_bits
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GlueCode> {
        self.codes.iter()
    }

    pub fn by_index(&self, index: usize) -> &GlueCode {
        &self.codes[index]
    }

    pub fn for_glue(&self, glue: &Glue) -> Option<&GlueCode> {
        self.by_glue.get(glue).map(|i| &self.codes[*i])
    }

    /// Decode a full bit string back to its glue, if it is a valid code.
    pub fn decode(&self, bits: &[bool]) -> Option<&GlueCode> {
        self.codes.iter().find(|c| c.bits == bits)
    }
}

fn bits_needed(n: usize) -> usize {
    // Smallest b with 2^b >= n, i.e. ceil(log2(n)).
    let mut b = 0;
    while (1usize << b) < n {
        b += 1;
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_only_gets_all_zero_code() {
        let table = CodeTable::assign(&[]);
        assert_eq!(table.half_bits, 1);
        assert_eq!(table.by_index(0).code_string(), "00");
        assert_eq!(table.by_index(0).glue, Glue::null());
    }

    #[test]
    fn two_named_glues_mirror_concatenation() {
        // Indices 1 and 2 at b=2: 1 = "01" -> "0110", 2 = "10" -> "1001".
        let table = CodeTable::assign(&[Glue::new("a", 1), Glue::new("b", 1)]);
        assert_eq!(table.half_bits, 2);
        assert_eq!(table.by_index(1).code_string(), "0110");
        assert_eq!(table.by_index(2).code_string(), "1001");
    }

    #[test]
    fn codes_are_palindromes_and_injective() {
        let glues: Vec<Glue> = (0..9).map(|i| Glue::new(format!("g{i}"), 1)).collect();
        let table = CodeTable::assign(&glues);
        let mut seen = std::collections::HashSet::new();
        for code in table.iter() {
            let mut rev = code.bits.clone();
            rev.reverse();
            assert_eq!(rev, code.bits, "palindrome");
            assert!(seen.insert(code.bits.clone()), "injective");
            // Decoding in either direction yields the same code.
            assert_eq!(table.decode(&rev).unwrap().index, code.index);
        }
        assert_eq!(table.code_len(), 2 * table.half_bits);
    }

    #[test]
    fn half_bits_matches_ceil_log2() {
        for (count, expect) in [(0, 1), (1, 1), (2, 2), (3, 2), (4, 3), (7, 3), (8, 4)] {
            let glues: Vec<Glue> = (0..count).map(|i| Glue::new(format!("g{i}"), 1)).collect();
            assert_eq!(CodeTable::assign(&glues).half_bits, expect, "count={count}");
        }
    }
}
