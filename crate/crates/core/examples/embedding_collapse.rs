//! Mean pairwise cosine as a collapse check: near 1 means the embedder maps
//! everything to one direction and cannot rank anything.

use hece::retrieval::{
    chunk_passages, mean_pairwise_cosine, Embedder, Embedding, EvalDataset, Passage, TfIdfEmbedder,
};
use hece::{ChunkSpec, Vocab};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = 0.5f64.sqrt();
    let toy = [vec![1.0, 0.0], vec![0.0, 1.0], vec![h, h]].map(Embedding::Dense);
    println!("e1, e2, (e1+e2)/sqrt2   {:.8}", mean_pairwise_cosine(&toy)?);

    let collapsed: Vec<Embedding> = (0..5)
        .map(|i| Embedding::Dense(vec![1.0, 1e-3 * i as f64]))
        .collect();
    println!(
        "nearly collapsed        {:.8}",
        mean_pairwise_cosine(&collapsed)?
    );

    let fixture = include_str!("../tests/data/tr_fixture.txt");
    let passages = fixture
        .lines()
        .enumerate()
        .map(|(i, l)| Passage {
            id: i.to_string(),
            text: l.to_owned(),
        })
        .collect();
    let ds = EvalDataset::new(passages, Vec::new())?;
    let vocab = Vocab::build(fixture.lines())?;
    let chunks = chunk_passages(&ds, &vocab, ChunkSpec::retrieval(8)?);
    let ids: Vec<Vec<u32>> = chunks.into_iter().map(|c| c.ids).collect();
    let tfidf = TfIdfEmbedder::fit(&ids, &vocab)?;
    let vectors = tfidf.embed_batch(&ids)?;
    println!(
        "tf-idf chunks ({:>4})    {:.8}",
        vectors.len(),
        mean_pairwise_cosine(&vectors)?
    );
    Ok(())
}
