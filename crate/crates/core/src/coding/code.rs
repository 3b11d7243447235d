//! Wiretap codes with a stochastic encoder, random codebooks drawn from the
//! pruned i.i.d. distribution, and the typicality decoder.

use rand::Rng;
use rayon::prelude::*;

use super::typicality::{iid_prob, is_cond_typical, typical_set, TypicalityParams};
use crate::bounds::{max_state_mi, min_mixture_mi, BoundOptions};
use crate::channel::{
    ensure_enumerable, mixture_unchecked, word_count, word_from_index, Avwc, Channel, Distribution,
    Words,
};
use crate::error::{invalid, Result};
use crate::optim::{simplex_grid, stream_rng};

/// A wiretap code: `J` messages, `L` randomisation indices per message, one
/// codeword per `(j, l)` and a decoder mapping every output word (by
/// lexicographic index) to a message or to an erasure. The map makes the
/// decoding sets disjoint by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiretapCode {
    n: usize,
    j_count: usize,
    l_count: usize,
    input_size: usize,
    output_size: usize,
    codewords: Vec<Vec<usize>>,
    decoder: Vec<Option<usize>>,
}

impl WiretapCode {
    /// `codewords` is indexed by `j * l_count + l`.
    pub fn new(
        n: usize,
        j_count: usize,
        l_count: usize,
        input_size: usize,
        output_size: usize,
        codewords: Vec<Vec<usize>>,
        decoder: Vec<Option<usize>>,
    ) -> Result<Self> {
        if n == 0 || j_count == 0 || l_count == 0 || input_size == 0 || output_size == 0 {
            return invalid("code dimensions must be positive");
        }
        if codewords.len() != j_count * l_count {
            return invalid(format!(
                "{} codewords for {j_count} messages x {l_count} indices",
                codewords.len()
            ));
        }
        if let Some(k) = codewords.iter().position(|w| w.len() != n) {
            return invalid(format!("codeword {k} does not have length {n}"));
        }
        if codewords.iter().flatten().any(|&a| a >= input_size) {
            return invalid("codeword symbol outside the input alphabet");
        }
        let outputs = word_count(output_size, n);
        ensure_enumerable("decoder output words", outputs)?;
        if decoder.len() as u128 != outputs {
            return invalid(format!(
                "decoder covers {} output words, expected {outputs}",
                decoder.len()
            ));
        }
        if decoder.iter().flatten().any(|&j| j >= j_count) {
            return invalid("decoder assigns an unknown message");
        }
        Ok(WiretapCode {
            n,
            j_count,
            l_count,
            input_size,
            output_size,
            codewords,
            decoder,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j_count(&self) -> usize {
        self.j_count
    }

    pub fn l_count(&self) -> usize {
        self.l_count
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn codeword(&self, j: usize, l: usize) -> &[usize] {
        &self.codewords[j * self.l_count + l]
    }

    pub fn codewords(&self) -> &[Vec<usize>] {
        &self.codewords
    }

    pub fn decoder(&self) -> &[Option<usize>] {
        &self.decoder
    }

    /// Decoded message for the output word with lexicographic index `y`.
    pub fn decode(&self, y: usize) -> Option<usize> {
        self.decoder[y]
    }

    /// Replaces the decoder, keeping the codebook.
    pub fn with_decoder(&self, decoder: Vec<Option<usize>>) -> Result<Self> {
        WiretapCode::new(
            self.n,
            self.j_count,
            self.l_count,
            self.input_size,
            self.output_size,
            self.codewords.clone(),
            decoder,
        )
    }

    pub(crate) fn check_against(&self, avwc: &Avwc) -> Result<()> {
        if avwc.input_size() != self.input_size || avwc.main_output_size() != self.output_size {
            return invalid(format!(
                "code is for {}-ary inputs and {}-ary outputs, channel has {} and {}",
                self.input_size,
                self.output_size,
                avwc.input_size(),
                avwc.main_output_size()
            ));
        }
        Ok(())
    }

    /// Applies the coordinate permutation `sigma` (word `w` becomes
    /// `w'_k = w_{sigma^{-1}(k)}`) to every codeword and decoding set. The
    /// result satisfies `e(s | C') = e(pi(s) | C)` with
    /// `pi(s)_i = s_{sigma(i)}`.
    pub fn permuted(&self, sigma: &[usize]) -> WiretapCode {
        let n = self.n;
        debug_assert_eq!(sigma.len(), n);
        let mut inv = vec![0; n];
        for (i, &s) in sigma.iter().enumerate() {
            inv[s] = i;
        }
        let codewords = self
            .codewords
            .iter()
            .map(|w| (0..n).map(|k| w[inv[k]]).collect())
            .collect();
        // y lies in the new set j iff pi(y) = (y_{sigma(i)})_i lies in D_j.
        let decoder = Words::new(self.output_size, n)
            .map(|y| {
                let image: Vec<usize> = sigma.iter().map(|&s| y[s]).collect();
                self.decoder[crate::channel::word_index(&image, self.output_size)]
            })
            .collect();
        WiretapCode {
            codewords,
            decoder,
            ..self.clone()
        }
    }
}

/// Where a random code came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeOrigin {
    PermutationFamily,
    Reduced,
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
enum Members {
    Explicit(Vec<WiretapCode>),
    /// Member `i` is the base code under the `i`-th permutation of `0..n` in
    /// lexicographic order.
    Permutations { base: WiretapCode, count: usize },
}

/// A family of wiretap codes with a selection distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCode {
    members: Members,
    mu: Distribution,
    origin: CodeOrigin,
}

impl RandomCode {
    pub fn explicit(members: Vec<WiretapCode>, mu: Distribution) -> Result<Self> {
        RandomCode::from_members(members, mu, CodeOrigin::Explicit)
    }

    /// A uniformly selected family tagged as the output of a reduction.
    pub fn reduced(members: Vec<WiretapCode>) -> Result<Self> {
        let k = members.len().max(1);
        RandomCode::from_members(members, Distribution::uniform(k), CodeOrigin::Reduced)
    }

    pub(crate) fn from_members(members: Vec<WiretapCode>, mu: Distribution, origin: CodeOrigin) -> Result<Self> {
        if members.is_empty() {
            return invalid("a random code needs at least one member");
        }
        if members.len() != mu.support_size() {
            return invalid(format!(
                "{} members but the selection distribution has {} entries",
                members.len(),
                mu.support_size()
            ));
        }
        let first = &members[0];
        if members.iter().any(|m| {
            m.n != first.n
                || m.j_count != first.j_count
                || m.input_size != first.input_size
                || m.output_size != first.output_size
        }) {
            return invalid("members disagree on block length, message count or alphabets");
        }
        Ok(RandomCode {
            members: Members::Explicit(members),
            mu,
            origin,
        })
    }

    pub(crate) fn permutation_family(base: WiretapCode, count: usize) -> Self {
        RandomCode {
            mu: Distribution::uniform(count),
            members: Members::Permutations { base, count },
            origin: CodeOrigin::PermutationFamily,
        }
    }

    pub fn len(&self) -> usize {
        match &self.members {
            Members::Explicit(m) => m.len(),
            Members::Permutations { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mu(&self) -> &Distribution {
        &self.mu
    }

    pub fn origin(&self) -> CodeOrigin {
        self.origin
    }

    /// Base code of a permutation family.
    pub fn base(&self) -> Option<&WiretapCode> {
        match &self.members {
            Members::Permutations { base, .. } => Some(base),
            Members::Explicit(_) => None,
        }
    }

    /// Member `i`, materialised on demand for permutation families.
    pub fn member(&self, i: usize) -> WiretapCode {
        match &self.members {
            Members::Explicit(m) => m[i].clone(),
            Members::Permutations { base, .. } => base.permuted(&permutation_from_index(i, base.n)),
        }
    }

    /// Permutation behind member `i` of a permutation family.
    pub fn member_permutation(&self, i: usize) -> Option<Vec<usize>> {
        match &self.members {
            Members::Permutations { base, .. } => Some(permutation_from_index(i, base.n)),
            Members::Explicit(_) => None,
        }
    }

    pub fn n(&self) -> usize {
        match &self.members {
            Members::Explicit(m) => m[0].n,
            Members::Permutations { base, .. } => base.n,
        }
    }

    pub fn j_count(&self) -> usize {
        match &self.members {
            Members::Explicit(m) => m[0].j_count,
            Members::Permutations { base, .. } => base.j_count,
        }
    }
}

/// `n!`, or `None` on overflow.
pub fn factorial(n: usize) -> Option<usize> {
    (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k))
}

/// The `index`-th permutation of `0..n` in lexicographic order.
pub fn permutation_from_index(mut index: usize, n: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let f = factorial(k).expect("permutation index within range");
        out.push(pool.remove(index / f));
        index %= f;
    }
    out
}

/// State mixtures the decoder takes the union over.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum DecoderGrid {
    /// Point masses on the states plus the uniform mixture.
    #[default]
    Default,
    /// The simplex grid with the given denominator.
    Simplex(usize),
}

impl DecoderGrid {
    pub fn points(&self, states: usize) -> Vec<Vec<f64>> {
        match self {
            DecoderGrid::Default => {
                let mut pts: Vec<Vec<f64>> = (0..states)
                    .map(|s| Distribution::<f64>::point_mass(states, s).probs().to_vec())
                    .collect();
                if states > 1 {
                    pts.push(vec![1.0 / states as f64; states]);
                }
                pts
            }
            DecoderGrid::Simplex(res) => simplex_grid(states, (*res).max(1)),
        }
    }
}

/// Output word `y` goes to message `j` iff it is conditionally typical for
/// some codeword of `j` under some grid mixture of the main channels, and for
/// no codeword of any other message. Everything else is an erasure.
pub fn decode_rule(
    code: &WiretapCode,
    avwc: &Avwc,
    tp: &TypicalityParams,
    grid: &DecoderGrid,
) -> Result<Vec<Option<usize>>> {
    code.check_against(avwc)?;
    if tp.n != code.n {
        return invalid("typicality block length differs from the code's");
    }
    let outputs = word_count(code.output_size, code.n);
    ensure_enumerable(
        "decoder table",
        outputs.saturating_mul((code.codewords.len() * avwc.state_count()) as u128),
    )?;
    let channels: Vec<Channel> = grid
        .points(avwc.state_count())
        .iter()
        .map(|q| mixture_unchecked(avwc.main(), q))
        .collect();
    let n = code.n;
    let decoder = (0..outputs as usize)
        .into_par_iter()
        .map(|yi| {
            let y = word_from_index(yi, code.output_size, n);
            let mut hit: Option<usize> = None;
            for (k, x) in code.codewords.iter().enumerate() {
                let j = k / code.l_count;
                if hit == Some(j) {
                    continue;
                }
                if channels.iter().any(|w| is_cond_typical(&y, x, w, tp.delta)) {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(j);
                }
            }
            hit
        })
        .collect();
    Ok(decoder)
}

/// Message and randomisation counts for a codebook built from input law `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodebookSizes {
    pub main_information: f64,
    pub eaves_information: f64,
    /// `n (min_q I(p, W_q) - max_s I(p, V_s) - τ)`.
    pub j_exponent: f64,
    /// `n (max_s I(p, V_s) + τ/4)`.
    pub l_exponent: f64,
    pub j_count: u128,
    pub l_count: u128,
}

pub fn codebook_sizes(p: &Distribution, avwc: &Avwc, n: usize, tau: f64) -> Result<CodebookSizes> {
    if p.support_size() != avwc.input_size() {
        return invalid("input distribution does not match the channel input alphabet");
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return invalid(format!("rate backoff must be positive, got {tau}"));
    }
    let main_information = min_mixture_mi(p.probs(), avwc.main(), &BoundOptions::default()).0;
    let eaves_information = max_state_mi(p.probs(), avwc.eaves()).0;
    let nf = n as f64;
    let j_exponent = nf * (main_information - eaves_information - tau);
    let l_exponent = nf * (eaves_information + tau / 4.0);
    let floor_pow = |e: f64| -> u128 {
        if e < 0.0 {
            0
        } else if e >= 127.0 {
            u128::MAX
        } else {
            e.exp2().floor() as u128
        }
    };
    Ok(CodebookSizes {
        main_information,
        eaves_information,
        j_exponent,
        l_exponent,
        j_count: floor_pow(j_exponent),
        l_count: floor_pow(l_exponent),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodebookParams {
    pub n: usize,
    pub delta: f64,
    pub tau: f64,
    pub seed: u64,
    pub decoder_grid: DecoderGrid,
}

/// Draws `J_n L_n` codewords i.i.d. from `p^n` conditioned on `T^n_{p,δ}`
/// (codeword `k` from RNG stream `k` under the seed) and builds the
/// typicality decoder.
pub fn build_random_codebook(p: &Distribution, avwc: &Avwc, params: &CodebookParams) -> Result<WiretapCode> {
    let tp = TypicalityParams::new(params.n, params.delta)?;
    let sizes = codebook_sizes(p, avwc, params.n, params.tau)?;
    if sizes.j_count < 1 {
        return invalid(format!(
            "degenerate rate: message exponent n(I_main - I_eaves - tau) = {:.6} gives J_n = 0",
            sizes.j_exponent
        ));
    }
    let total = sizes.j_count.saturating_mul(sizes.l_count);
    ensure_enumerable("codebook entries", total.saturating_mul(params.n as u128))?;
    let typical = typical_set(p, &tp)?;
    if typical.is_empty() {
        return invalid(format!(
            "no word of length {} is typical within {}",
            params.n, params.delta
        ));
    }
    let weights: Vec<f64> = typical.iter().map(|x| iid_prob(p, x)).collect();
    let mass: f64 = weights.iter().sum();
    let cumulative: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / mass;
            Some(*acc)
        })
        .collect();
    let codewords: Vec<Vec<usize>> = (0..total as u64)
        .map(|k| {
            let u: f64 = stream_rng(params.seed, k).random();
            let idx = cumulative.partition_point(|&c| c <= u).min(typical.len() - 1);
            typical[idx].clone()
        })
        .collect();
    let (j, l) = (sizes.j_count as usize, sizes.l_count as usize);
    let outputs = word_count(avwc.main_output_size(), params.n) as usize;
    let code = WiretapCode::new(
        params.n,
        j,
        l,
        avwc.input_size(),
        avwc.main_output_size(),
        codewords,
        vec![None; outputs],
    )?;
    let decoder = decode_rule(&code, avwc, &tp, &params.decoder_grid)?;
    code.with_decoder(decoder)
}
