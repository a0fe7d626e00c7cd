//! Sparse power-series expansion of q * prod (1 - q^n)^24.
//!
//! Euler's pentagonal number theorem makes the eta product sparse:
//! prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2} over all integers k, with
//! only about 2 * sqrt(2N/3) nonzero terms below degree N. Raising it to
//! the 24th power is done by 24 sparse-by-dense passes, each costing
//! O(N * sqrt(N)) additions.

use num_bigint::BigInt;
use num_traits::Zero;

use super::TauError;
use crate::par::{self, Exec};

/// Number of eta factors in the discriminant form.
pub const ETA_POWER: usize = 24;

// Work unit per task. Small enough to balance the triangular cost profile.
const CHUNK: usize = 512;

/// Integer representation used for the convolution passes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Representation {
    /// 128-bit passes with checked arithmetic; a pass that would overflow
    /// is redone, together with all later passes, in arbitrary precision.
    #[default]
    Auto,
    /// Arbitrary precision throughout.
    Big,
    /// 128-bit only; overflow is an error.
    Fixed128,
}

/// A nonzero term `sign * q^offset` of the eta product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EtaTerm {
    pub offset: usize,
    pub negative: bool,
}

/// Nonzero terms of prod (1 - q^n) up to and including degree `max_degree`,
/// by ascending offset.
pub fn eta_terms(max_degree: usize) -> Vec<EtaTerm> {
    let mut terms = vec![EtaTerm {
        offset: 0,
        negative: false,
    }];
    for k in 1usize.. {
        let lo = k * (3 * k - 1) / 2;
        if lo > max_degree {
            break;
        }
        let negative = k % 2 == 1;
        terms.push(EtaTerm {
            offset: lo,
            negative,
        });
        let hi = k * (3 * k + 1) / 2;
        if hi <= max_degree {
            terms.push(EtaTerm {
                offset: hi,
                negative,
            });
        }
    }
    terms
}

/// One pass: `out[n] = sum_t sign_t * input[n - offset_t]`, overflow-checked.
fn pass_i128(exec: Exec, terms: &[EtaTerm], input: &[i128], out: &mut [i128]) -> Result<(), usize> {
    par::try_for_each_chunk_mut(exec, out, CHUNK, |start, chunk| {
        for (i, slot) in chunk.iter_mut().enumerate() {
            let n = start + i;
            let mut acc: i128 = 0;
            for t in terms.iter().take_while(|t| t.offset <= n) {
                let x = input[n - t.offset];
                let next = if t.negative {
                    acc.checked_sub(x)
                } else {
                    acc.checked_add(x)
                };
                acc = next.ok_or(n)?;
            }
            *slot = acc;
        }
        Ok(())
    })
}

fn pass_big(exec: Exec, terms: &[EtaTerm], input: &[BigInt], out: &mut [BigInt]) {
    par::for_each_chunk_mut(exec, out, CHUNK, |start, chunk| {
        for (i, slot) in chunk.iter_mut().enumerate() {
            let n = start + i;
            let mut acc = BigInt::zero();
            for t in terms.iter().take_while(|t| t.offset <= n) {
                let x = &input[n - t.offset];
                if t.negative {
                    acc -= x;
                } else {
                    acc += x;
                }
            }
            *slot = acc;
        }
    });
}

/// Coefficients of prod (1 - q^n)^power up to degree `len - 1`.
pub fn eta_power(
    len: usize,
    power: usize,
    exec: Exec,
    repr: Representation,
) -> Result<Vec<BigInt>, TauError> {
    if len == 0 {
        return Ok(Vec::new());
    }
    let terms = eta_terms(len - 1);

    let mut done = 0;
    let mut small = vec![0i128; len];
    small[0] = 1;
    if repr != Representation::Big {
        let mut scratch = vec![0i128; len];
        while done < power {
            match pass_i128(exec, &terms, &small, &mut scratch) {
                Ok(()) => {
                    std::mem::swap(&mut small, &mut scratch);
                    done += 1;
                }
                Err(index) if repr == Representation::Fixed128 => {
                    return Err(TauError::Overflow {
                        pass: done + 1,
                        index,
                    });
                }
                Err(_) => break,
            }
        }
    }

    let mut big: Vec<BigInt> = small.into_iter().map(BigInt::from).collect();
    if done < power {
        let mut scratch = vec![BigInt::zero(); len];
        while done < power {
            pass_big(exec, &terms, &big, &mut scratch);
            std::mem::swap(&mut big, &mut scratch);
            done += 1;
        }
    }
    Ok(big)
}
