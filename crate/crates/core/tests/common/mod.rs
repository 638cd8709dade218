//! Seeded synthetic Bengali words and scraped-style text for tests.
#![allow(dead_code)]

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub const CONSONANTS: &[&str] = &[
    "ক", "খ", "গ", "ঘ", "ঙ", "চ", "ছ", "জ", "ঝ", "ঞ", "ট", "ঠ", "ড", "ঢ", "ণ", "ত", "থ", "দ", "ধ", "ন", "প", "ফ", "ব",
    "ভ", "ম", "য", "র", "ল", "শ", "ষ", "স", "হ", "ড়", "ঢ়", "য়", "ৎ",
];
pub const VOWEL_SIGNS: &[&str] = &["া", "ি", "ী", "ু", "ূ", "ে", "ৈ", "ো", "ৌ"];
pub const VOWELS: &[&str] = &["অ", "আ", "ই", "উ", "এ", "ও"];
pub const SIGNS: &[&str] = &["ং", "ঃ", "ঁ"];
pub const CONJUNCTS: &[&str] = &[
    "ক্ত",
    "ক্ষ",
    "ক্র",
    "ক্ক",
    "ক্য",
    "গ্য",
    "চ্ছ",
    "স্ম",
    "দ্দ",
    "দ্ম",
    "ম্ভ",
    "ত্ত্ব",
    "শ্ব",
    "গ্র",
    "ট্র",
    "ঙ্গ",
    "ঞ্চ",
    "ঞ্জ",
    "হ্ন",
    "ন্ন",
    "ষ্ট",
    "স্ত",
    "ন্ত",
    "ল্প",
    "ক্ষ্ম",
    "ন্দ্র",
    "দ্ধ",
    "ব্য",
    "র্ত",
    "র্ম",
];

pub struct WordGen(Xoshiro256PlusPlus);

impl WordGen {
    pub fn new(seed: u64) -> Self {
        WordGen(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    pub fn pick<'a>(&mut self, items: &[&'a str]) -> &'a str {
        items[self.below(items.len())]
    }

    /// A plausible word of `1..=max_units` grapheme units.
    pub fn word(&mut self, max_units: usize) -> String {
        let units = 1 + self.below(max_units);
        let mut w = String::new();
        for i in 0..units {
            let r = self.below(100);
            let unit = if i == 0 && r < 8 {
                self.pick(VOWELS)
            } else if i > 0 && r < 35 {
                self.pick(VOWEL_SIGNS)
            } else if r < 50 {
                self.pick(CONJUNCTS)
            } else if i > 0 && r < 53 {
                self.pick(SIGNS)
            } else {
                self.pick(CONSONANTS)
            };
            w.push_str(unit);
        }
        juktak::corpus::normalize(&w)
    }

    pub fn words(&mut self, n: usize, max_units: usize) -> Vec<String> {
        (0..n).map(|_| self.word(max_units)).collect()
    }

    /// A whitespace token as found in scraped news text: Bengali words with
    /// punctuation, digits, Latin fragments, joiners and stray marks.
    pub fn scraped_token(&mut self) -> String {
        let mut t = String::new();
        match self.below(20) {
            0 => t.push_str(self.pick(&["“", "(", "'", "‘", "["])),
            1 => t.push_str(self.pick(&["www.", "http://", "#"])),
            _ => {}
        }
        match self.below(20) {
            0 => t.push_str(self.pick(&["Dhaka", "COVID-19", "BBC", "e-mail"])),
            1 => t.push_str(self.pick(&["২০২০", "১২৩", "42", "৫%"])),
            2 => {
                let w = self.word(5);
                t.push_str(&w);
                t.push_str(self.pick(&["\u{200D}", "\u{200C}"]));
                t.push_str(&self.word(3));
            }
            3 => {
                // Malformed: stray hasanta or leading mark.
                t.push_str(self.pick(&["্", "া", "়"]));
                t.push_str(&self.word(4));
                t.push('্');
            }
            _ => t.push_str(&self.word(7)),
        }
        match self.below(10) {
            0 => t.push_str(self.pick(&["।", "॥", ",", "?", "!", "”", ")", ":", ";", "-", "..."])),
            1 => t.push_str(self.pick(&["-এর", "'র", "/"])),
            _ => {}
        }
        t
    }

    pub fn scraped_text(&mut self, tokens: usize) -> String {
        let mut s = String::new();
        for i in 0..tokens {
            if i > 0 {
                s.push_str(if self.below(12) == 0 { "\n" } else { " " });
            }
            s.push_str(&self.scraped_token());
        }
        s
    }
}
