//! Textual code files (JSON) for chaining pipeline stages. Codewords are
//! symbol strings over the spec's input labels; decoders are assignment
//! lists over the main output words in lexicographic order, `null` meaning
//! erasure.

use avwc_core::coding::{CodeOrigin, RandomCode, WiretapCode};
use avwc_core::Distribution;
use serde::{Deserialize, Serialize};

use crate::spec::ChannelSpec;

pub const CODE_FORMAT: &str = "avwc-code";
pub const CODE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterministicCode {
    pub n: usize,
    pub messages: usize,
    pub randomisation: usize,
    /// `codewords[j][l]`.
    pub codewords: Vec<Vec<String>>,
    pub decoder: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OriginTag {
    PermutationFamily,
    Reduced,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomCodeFile {
    pub origin: OriginTag,
    /// Base code of a permutation family; its members are implied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<DeterministicCode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<DeterministicCode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mu: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CodeBody {
    Deterministic(DeterministicCode),
    Random(RandomCodeFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeFile {
    pub format: String,
    pub version: u32,
    pub input_alphabet: Vec<String>,
    pub output_alphabet: Vec<String>,
    #[serde(flatten)]
    pub body: CodeBody,
}

/// A loaded code of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedCode {
    Deterministic(WiretapCode),
    Random(RandomCode),
}

fn compact(labels: &[String]) -> bool {
    labels.iter().all(|l| l.chars().count() == 1)
}

pub(crate) fn word_to_string(word: &[usize], labels: &[String]) -> String {
    let parts: Vec<&str> = word.iter().map(|&a| labels[a].as_str()).collect();
    if compact(labels) {
        parts.concat()
    } else {
        parts.join(" ")
    }
}

fn string_to_word(s: &str, labels: &[String]) -> Result<Vec<usize>, String> {
    let tokens: Vec<String> = if s.chars().any(char::is_whitespace) || !compact(labels) {
        s.split_whitespace().map(str::to_string).collect()
    } else {
        s.chars().map(|c| c.to_string()).collect()
    };
    tokens
        .iter()
        .map(|t| labels.iter().position(|l| l == t).ok_or_else(|| format!("symbol {t:?} is not an input label")))
        .collect()
}

fn encode(code: &WiretapCode, labels: &[String]) -> DeterministicCode {
    DeterministicCode {
        n: code.n(),
        messages: code.j_count(),
        randomisation: code.l_count(),
        codewords: (0..code.j_count())
            .map(|j| (0..code.l_count()).map(|l| word_to_string(code.codeword(j, l), labels)).collect())
            .collect(),
        decoder: code.decoder().to_vec(),
    }
}

fn decode(d: &DeterministicCode, spec: &ChannelSpec) -> Result<WiretapCode, String> {
    if d.codewords.len() != d.messages || d.codewords.iter().any(|c| c.len() != d.randomisation) {
        return Err(format!("expected {} x {} codewords", d.messages, d.randomisation));
    }
    let words = d
        .codewords
        .iter()
        .flatten()
        .map(|w| string_to_word(w, &spec.input_labels))
        .collect::<Result<Vec<_>, _>>()?;
    WiretapCode::new(
        d.n,
        d.messages,
        d.randomisation,
        spec.input_labels.len(),
        spec.main_labels.len(),
        words,
        d.decoder.clone(),
    )
    .map_err(|e| e.to_string())
}

impl CodeFile {
    fn wrap(spec: &ChannelSpec, body: CodeBody) -> Self {
        CodeFile {
            format: CODE_FORMAT.into(),
            version: CODE_VERSION,
            input_alphabet: spec.input_labels.clone(),
            output_alphabet: spec.main_labels.clone(),
            body,
        }
    }

    pub fn deterministic(code: &WiretapCode, spec: &ChannelSpec) -> Self {
        CodeFile::wrap(spec, CodeBody::Deterministic(encode(code, &spec.input_labels)))
    }

    pub fn random(rc: &RandomCode, spec: &ChannelSpec) -> Self {
        let labels = &spec.input_labels;
        let body = match rc.origin() {
            CodeOrigin::PermutationFamily => RandomCodeFile {
                origin: OriginTag::PermutationFamily,
                base: rc.base().map(|b| encode(b, labels)),
                members: Vec::new(),
                mu: Vec::new(),
            },
            origin => RandomCodeFile {
                origin: if origin == CodeOrigin::Reduced { OriginTag::Reduced } else { OriginTag::Explicit },
                base: None,
                members: (0..rc.len()).map(|i| encode(&rc.member(i), labels)).collect(),
                mu: rc.mu().probs().to_vec(),
            },
        };
        CodeFile::wrap(spec, CodeBody::Random(body))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code file serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let file: CodeFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if file.format != CODE_FORMAT {
            return Err(format!("not a code file (format {:?})", file.format));
        }
        if file.version != CODE_VERSION {
            return Err(format!("unsupported code file version {}", file.version));
        }
        Ok(file)
    }

    /// Resolves the file against a spec; alphabets must agree.
    pub fn load(&self, spec: &ChannelSpec) -> Result<LoadedCode, String> {
        if self.input_alphabet != spec.input_labels || self.output_alphabet != spec.main_labels {
            return Err("code file alphabets differ from the spec's".into());
        }
        match &self.body {
            CodeBody::Deterministic(d) => Ok(LoadedCode::Deterministic(decode(d, spec)?)),
            CodeBody::Random(r) => {
                let rc = match r.origin {
                    OriginTag::PermutationFamily => {
                        let base = r.base.as_ref().ok_or("permutation family without a base code")?;
                        avwc_core::coding::robustify(&decode(base, spec)?, &spec.avwc).map_err(|e| e.to_string())?
                    }
                    OriginTag::Reduced => {
                        let members = r.members.iter().map(|m| decode(m, spec)).collect::<Result<Vec<_>, _>>()?;
                        RandomCode::reduced(members).map_err(|e| e.to_string())?
                    }
                    OriginTag::Explicit => {
                        let members = r.members.iter().map(|m| decode(m, spec)).collect::<Result<Vec<_>, _>>()?;
                        let mu = Distribution::new(r.mu.clone()).map_err(|e| e.to_string())?;
                        RandomCode::explicit(members, mu).map_err(|e| e.to_string())?
                    }
                };
                Ok(LoadedCode::Random(rc))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::parse_spec;

    fn spec(labels: &str) -> ChannelSpec {
        parse_spec(&format!(
            "[alphabets]\ninput = {labels}\nmain_output = 2\neaves_output = 2\n[[states]]\nmain = [[0.9, 0.1], [0.1, 0.9]]\neaves = [[0.6, 0.4], [0.4, 0.6]]\n"
        ))
        .unwrap()
    }

    fn code() -> WiretapCode {
        WiretapCode::new(2, 2, 1, 2, 2, vec![vec![0, 1], vec![1, 1]], vec![Some(0), None, Some(1), Some(1)]).unwrap()
    }

    #[test]
    fn deterministic_round_trip() {
        let s = spec("2");
        let file = CodeFile::deterministic(&code(), &s);
        let text = file.to_json();
        assert!(text.contains("\"01\""));
        let back = CodeFile::from_json(&text).unwrap().load(&s).unwrap();
        assert_eq!(back, LoadedCode::Deterministic(code()));
    }

    #[test]
    fn long_labels_are_space_separated() {
        let s = spec(r#"["lo", "hi"]"#);
        let file = CodeFile::deterministic(&code(), &s);
        assert!(file.to_json().contains("\"lo hi\""));
        assert_eq!(file.load(&s).unwrap(), LoadedCode::Deterministic(code()));
    }

    #[test]
    fn random_codes_round_trip() {
        let s = spec("2");
        let family = avwc_core::coding::robustify(&code(), &s.avwc).unwrap();
        let file = CodeFile::random(&family, &s);
        assert_eq!(CodeFile::from_json(&file.to_json()).unwrap().load(&s).unwrap(), LoadedCode::Random(family));
        let reduced = RandomCode::reduced(vec![code(), code().permuted(&[1, 0])]).unwrap();
        let file = CodeFile::random(&reduced, &s);
        assert_eq!(file.load(&s).unwrap(), LoadedCode::Random(reduced));
    }

    #[test]
    fn mismatched_alphabets_rejected() {
        let file = CodeFile::deterministic(&code(), &spec("2"));
        assert!(file.load(&spec(r#"["lo", "hi"]"#)).is_err());
        assert!(CodeFile::from_json("{\"format\": \"other\"}").is_err());
    }
}
