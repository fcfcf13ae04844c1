use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub id: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub text: String,
    /// Id of the gold passage.
    pub passage_id: String,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed dataset: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("duplicate passage id {0:?}")]
    DuplicatePassage(String),
    #[error("duplicate question id {0:?}")]
    DuplicateQuestion(String),
    #[error("question {question:?} refers to unknown passage {passage:?}")]
    UnknownPassage { question: String, passage: String },
}

/// Passages plus questions linked to their gold passage.
///
/// Serialised as `{"passages": [{id, text}], "questions": [{id, text, passage_id}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDataset")]
pub struct EvalDataset {
    passages: Vec<Passage>,
    questions: Vec<Question>,
}

#[derive(Deserialize)]
struct RawDataset {
    passages: Vec<Passage>,
    questions: Vec<Question>,
}

impl TryFrom<RawDataset> for EvalDataset {
    type Error = DatasetError;

    fn try_from(raw: RawDataset) -> Result<Self, Self::Error> {
        EvalDataset::new(raw.passages, raw.questions)
    }
}

impl EvalDataset {
    pub fn new(passages: Vec<Passage>, questions: Vec<Question>) -> Result<Self, DatasetError> {
        let mut passage_ids = HashSet::with_capacity(passages.len());
        for p in &passages {
            if !passage_ids.insert(p.id.as_str()) {
                return Err(DatasetError::DuplicatePassage(p.id.clone()));
            }
        }
        let mut question_ids = HashSet::with_capacity(questions.len());
        for q in &questions {
            if !question_ids.insert(q.id.as_str()) {
                return Err(DatasetError::DuplicateQuestion(q.id.clone()));
            }
            if !passage_ids.contains(q.passage_id.as_str()) {
                return Err(DatasetError::UnknownPassage {
                    question: q.id.clone(),
                    passage: q.passage_id.clone(),
                });
            }
        }
        Ok(EvalDataset {
            passages,
            questions,
        })
    }

    pub fn passages(&self) -> &[Passage] {
        &self.passages
    }

    pub fn questions(&self) -> &[Question] {
        &self.questions
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, DatasetError> {
        let raw: RawDataset = serde_json::from_reader(reader)?;
        raw.try_into()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DatasetError> {
        Self::from_reader(BufReader::new(File::open(path)?))
    }
}
