//! Fixed-width bitsets indexed by set masks, i.e. subsets of the power set.
//!
//! Position `i` stands for the set whose bit pattern is `i`. `W` words cover
//! `64 * W` positions, so `W = 1` serves `n <= 6` and `W = 2^(n-6)` beyond.

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub(crate) struct Bits<const W: usize>(pub [u64; W]);

impl<const W: usize> Bits<W> {
    pub const ZERO: Self = Bits([0; W]);

    /// All positions `0..2^n`.
    pub fn universe(n: u8) -> Self {
        let size = 1usize << n;
        let mut b = Self::ZERO;
        for (w, word) in b.0.iter_mut().enumerate() {
            let lo = w * 64;
            if lo >= size {
                break;
            }
            let span = (size - lo).min(64);
            *word = if span == 64 {
                u64::MAX
            } else {
                (1u64 << span) - 1
            };
        }
        b
    }

    /// Positions whose set contains element `e` (1-based).
    pub fn containing(n: u8, e: usize) -> Self {
        let mut b = Self::ZERO;
        for i in 0..(1usize << n) {
            if i & (1 << (e - 1)) != 0 {
                b.set(i);
            }
        }
        b
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn and(&self, o: &Self) -> Self {
        let mut r = *self;
        for w in 0..W {
            r.0[w] &= o.0[w];
        }
        r
    }

    #[inline]
    pub fn or(&self, o: &Self) -> Self {
        let mut r = *self;
        for w in 0..W {
            r.0[w] |= o.0[w];
        }
        r
    }

    #[inline]
    pub fn or_assign(&mut self, o: &Self) {
        for w in 0..W {
            self.0[w] |= o.0[w];
        }
    }

    /// `self & !o`
    #[inline]
    pub fn minus(&self, o: &Self) -> Self {
        let mut r = *self;
        for w in 0..W {
            r.0[w] &= !o.0[w];
        }
        r
    }

    #[inline]
    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// `r[i] = self[i + k]` for a power-of-two `k`.
    #[inline]
    pub fn shift_down(&self, k: usize) -> Self {
        let mut r = Self::ZERO;
        if k >= 64 {
            let step = k >> 6;
            r.0[..W - step].copy_from_slice(&self.0[step..]);
        } else {
            for w in 0..W {
                let hi = if w + 1 < W {
                    self.0[w + 1] << (64 - k)
                } else {
                    0
                };
                r.0[w] = (self.0[w] >> k) | hi;
            }
        }
        r
    }

    /// `{ S : self[S ∪ x] }`, given `has[b]` = positions containing bit `b`.
    #[inline]
    pub fn gather_union(&self, x: u16, has: &[Self]) -> Self {
        let mut g = *self;
        let mut bits = x;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let upper = g.and(&has[b]);
            g = upper.or(&upper.shift_down(1 << b));
        }
        g
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let t = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }
}
