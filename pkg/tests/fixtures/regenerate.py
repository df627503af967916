"""Regenerate committed fixture files.

Run from the repository root after an intentional behavior change:

    python3 tests/fixtures/regenerate.py

Rewrites corpus.jsonl (the bundled annotated corpus), golden_prompt.txt
(judge prompt snapshot), golden_metrics.json (structured metrics for the
first corpus record), and golden_audit.jsonl (mock-backend audit output,
timings stripped). Golden files are meant to be reviewed by hand before
committing: they freeze observed behavior, so a diff here is a behavior
change.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent

A = "overall_quality comprehensiveness actionability sentiment_polarity constructiveness technical_terms objectivity alignment vagueness fairness politeness clarity_readability factuality".split()


def aspects(*values):
    assert len(values) == 13
    return dict(zip(A, values))


CORPUS = [
    {
        "id": "r001",
        "title": "Sparse Attention for Long Document Modeling",
        "abstract": "We propose a sparse attention mechanism that scales transformer models to long documents with near-linear cost, and evaluate it on summarization and retrieval benchmarks.",
        "review_text": "The paper tackles an important problem and the proposed sparse attention pattern is clearly motivated. Section 3 explains the block layout well, and Table 2 shows consistent gains. However, the comparison in Eq. 4 may be unfair because the baselines were not tuned; please report the tuning budget. Could the authors also clarify how Figure 3 was produced? Overall I lean positive, but the evaluation needs one more ablation.",
        "human_aspects": aspects(4, 4, 4, 3, 4, 4, 4, 4, 2, 4, 4, 4, 4),
        "human_overall": 3.8,
        "reviewer_openalex_id": "A2208157607",
    },
    {
        "id": "r002",
        "title": "Sparse Attention for Long Document Modeling",
        "abstract": "We propose a sparse attention mechanism that scales transformer models to long documents with near-linear cost, and evaluate it on summarization and retrieval benchmarks.",
        "review_text": "Bad paper. The idea is not new and the writing is sloppy. Reject.",
        "human_aspects": aspects(1, 1, 1, 1, 1, 2, 1, 2, 3, 1, 1, 2, 2),
        "human_overall": 1.2,
    },
    {
        "id": "r003",
        "title": "Calibrated Uncertainty Estimates for Graph Neural Networks",
        "abstract": "This work studies calibration of graph neural networks under distribution shift and introduces a temperature-scaling variant that uses neighborhood statistics.",
        "review_text": "Thank you for the submission. The calibration analysis in Section 4 is thorough and the neighborhood temperature idea appears sound. I verified Eq. 7 and it is correct. The main weakness is the limited set of datasets; results might not transfer to dense graphs. Please add at least one large-scale benchmark and discuss the failure case shown in Figure 5. The related-work coverage of (Guo et al., 2017) is adequate.",
        "human_aspects": aspects(4, 5, 5, 3, 5, 4, 4, 5, 2, 4, 5, 4, 5),
        "human_overall": 4.3,
        "reviewer_openalex_id": "A5017898742",
    },
    {
        "id": "r004",
        "title": "Calibrated Uncertainty Estimates for Graph Neural Networks",
        "abstract": "This work studies calibration of graph neural networks under distribution shift and introduces a temperature-scaling variant that uses neighborhood statistics.",
        "review_text": "The submission seems interesting but I am not an expert in this area. The experiments look fine. Maybe the authors could add more baselines? I think the paper is probably okay.",
        "human_aspects": aspects(2, 2, 2, 3, 2, 2, 2, 3, 5, 3, 3, 3, 3),
        "human_overall": 2.1,
    },
    {
        "id": "r005",
        "title": "Rehearsal-Free Continual Learning via Orthogonal Projections",
        "abstract": "We present a continual learning method that constrains gradient updates to the orthogonal complement of previous task subspaces, avoiding stored rehearsal data.",
        "review_text": "This is a strong and well executed paper. The orthogonal projection formulation in Section 3.2 is elegant, and the proof of Theorem 1 in Appendix A is correct as far as I can tell. Experiments on Split-CIFAR and Split-ImageNet are convincing, with clear gains in Table 1 and Table 3. One concern: the memory cost of storing projection bases grows with the number of tasks; please quantify this in the camera-ready. Minor: line 142 has a typo.",
        "human_aspects": aspects(5, 5, 4, 4, 5, 5, 4, 5, 1, 5, 4, 5, 5),
        "human_overall": 4.7,
        "reviewer_openalex_id": "A3134691328",
    },
    {
        "id": "r006",
        "title": "Rehearsal-Free Continual Learning via Orthogonal Projections",
        "abstract": "We present a continual learning method that constrains gradient updates to the orthogonal complement of previous task subspaces, avoiding stored rehearsal data.",
        "review_text": "The authors clearly have no idea what they are doing. The so-called theory is trivial and the experiments are useless. Anyone familiar with the field knows this was done years ago. This is a waste of reviewer time.",
        "human_aspects": aspects(1, 2, 1, 1, 1, 2, 1, 3, 2, 1, 1, 3, 2),
        "human_overall": 1.0,
    },
    {
        "id": "r007",
        "title": "Data Pruning with Influence-Aware Scoring",
        "abstract": "We derive an influence-aware score for pruning training data and show that removing up to forty percent of examples can preserve accuracy across vision tasks.",
        "review_text": "The method is straightforward and the presentation is clear. My main question: how sensitive is the score to the choice of validation set? Section 5 hints at this but gives no numbers. Also, the claim that pruning improves robustness (Section 6) seems overstated; Figure 4 shows mixed results at best. I would appreciate a significance test. The paper cites [12] and [18] appropriately, though arXiv:2106.05237 is missing from the comparison.",
        "human_aspects": aspects(3, 4, 4, 3, 4, 3, 4, 4, 2, 4, 3, 4, 3),
        "human_overall": 3.4,
        "reviewer_openalex_id": "A2150312117",
    },
    {
        "id": "r008",
        "title": "Data Pruning with Influence-Aware Scoring",
        "abstract": "We derive an influence-aware score for pruning training data and show that removing up to forty percent of examples can preserve accuracy across vision tasks.",
        "review_text": "Nice work. I enjoyed reading it.",
        "human_aspects": aspects(2, 1, 1, 5, 2, 1, 2, 2, 4, 3, 4, 3, 3),
        "human_overall": 1.8,
    },
    {
        "id": "r009",
        "title": "Neural Theorem Proving with Retrieval-Augmented Tactics",
        "abstract": "We combine a retrieval index over formal proof corpora with a tactic-prediction model, improving proof success rates on two interactive theorem proving benchmarks.",
        "review_text": "The system description is detailed and reproducible: the authors give the index construction in Algorithm 1, hyperparameters in Appendix B, and promise code release. The success-rate gains in Table 4 are modest but real. I am skeptical of the qualitative analysis in Section 6.2, which cherry-picks proofs; a random sample would be more objective. Could you report the retrieval hit rate separately for each benchmark? Please also fix the broken reference on page 7.",
        "human_aspects": aspects(4, 4, 5, 3, 4, 4, 3, 4, 2, 4, 4, 4, 4),
        "human_overall": 3.9,
    },
    {
        "id": "r010",
        "title": "Neural Theorem Proving with Retrieval-Augmented Tactics",
        "abstract": "We combine a retrieval index over formal proof corpora with a tactic-prediction model, improving proof success rates on two interactive theorem proving benchmarks.",
        "review_text": "This paper might be acceptable. The approach is perhaps reasonable and results seem somewhat fine. Some parts could be improved maybe.",
        "human_aspects": aspects(2, 1, 1, 3, 2, 1, 2, 2, 5, 3, 3, 2, 3),
        "human_overall": 1.6,
    },
    {
        "id": "r011",
        "title": "Differentially Private Fine-Tuning at Scale",
        "abstract": "This paper analyzes privacy-utility trade-offs when fine-tuning large language models with differential privacy and proposes a per-layer clipping schedule.",
        "review_text": "Dear authors, thank you for a careful study. Strengths: the per-layer clipping schedule is well motivated by the gradient norm statistics in Figure 2; the epsilon accounting follows (Abadi et al., 2016) correctly; the ablation in Table 5 isolates the schedule's effect. Weaknesses: only one model family is evaluated, and Section 4.3 conflates two privacy budgets. Suggestion: report results at epsilon 1 and 8, and clarify whether the schedule was tuned on held-out private data, which would leak privacy. Despite the issues I recommend acceptance after revision.",
        "human_aspects": aspects(4, 5, 5, 3, 5, 5, 4, 5, 1, 4, 5, 4, 4),
        "human_overall": 4.2,
        "reviewer_openalex_id": "A4381204996",
    },
    {
        "id": "r012",
        "title": "Differentially Private Fine-Tuning at Scale",
        "abstract": "This paper analyzes privacy-utility trade-offs when fine-tuning large language models with differential privacy and proposes a per-layer clipping schedule.",
        "review_text": "The paper is fine but the topic is boring and privacy research is pointless in my opinion. The authors should work on something else. I skimmed the experiments; they are probably correct.",
        "human_aspects": aspects(1, 2, 1, 2, 1, 2, 1, 2, 4, 1, 2, 3, 2),
        "human_overall": 1.3,
    },
    {
        "id": "r013",
        "title": "Zero-Shot Cross-Lingual Transfer with Typological Priors",
        "abstract": "We inject typological features into multilingual encoders as soft priors and measure zero-shot transfer on part-of-speech tagging and dependency parsing across 40 languages.",
        "review_text": "Interesting direction. The typological prior injection in Section 3 is simple, which I consider a plus. Results in Table 2 show gains concentrated in low-resource languages; this matches the stated motivation. Two requests. First, the significance of per-language deltas is unclear; please add confidence intervals. Second, the error analysis in Section 5 could compare against the baseline's errors rather than only describing the model's. The writing is clear throughout.",
        "human_aspects": aspects(4, 4, 4, 4, 4, 4, 4, 4, 2, 4, 4, 5, 4),
        "human_overall": 4.0,
        "reviewer_openalex_id": "A2058924713",
    },
    {
        "id": "r014",
        "title": "Zero-Shot Cross-Lingual Transfer with Typological Priors",
        "abstract": "We inject typological features into multilingual encoders as soft priors and measure zero-shot transfer on part-of-speech tagging and dependency parsing across 40 languages.",
        "review_text": "The evaluation is flawed: the test languages overlap with the pretraining corpus, so the zero-shot claim in the title is wrong. See Section 4.1 where the authors admit the overlap. Until this is fixed the results are meaningless. The idea itself may have merit.",
        "human_aspects": aspects(3, 2, 3, 1, 2, 3, 4, 4, 2, 3, 2, 3, 4),
        "human_overall": 2.8,
    },
    {
        "id": "r015",
        "title": "Implicit Neural Representations for Sparse-View CT Reconstruction",
        "abstract": "An implicit neural representation with a learned regularizer reconstructs computed tomography images from sparse projections, reducing artifacts relative to iterative baselines.",
        "review_text": "The clinical motivation is solid and the method combines known pieces sensibly. My concerns are about evaluation. The peak signal-to-noise ratio gains in Table 1 are within the variance reported in Appendix C, so the improvement may not be significant. The reader cannot tell how the regularizer was trained; Section 3.3 omits the loss weighting. Please provide the training details and a statistical test. Figure 6 is compelling but anecdotal.",
        "human_aspects": aspects(3, 4, 4, 2, 4, 4, 4, 4, 2, 4, 4, 4, 4),
        "human_overall": 3.5,
    },
    {
        "id": "r016",
        "title": "Implicit Neural Representations for Sparse-View CT Reconstruction",
        "abstract": "An implicit neural representation with a learned regularizer reconstructs computed tomography images from sparse projections, reducing artifacts relative to iterative baselines.",
        "review_text": "Excellent contribution! The results are impressive and the paper reads beautifully. I especially liked the elegant formulation and the great figures. Accept.",
        "human_aspects": aspects(2, 1, 1, 5, 2, 2, 1, 3, 4, 3, 5, 4, 3),
        "human_overall": 2.0,
    },
    {
        "id": "r017",
        "title": "Bandit Algorithms for Adaptive Clinical Trial Design",
        "abstract": "We adapt Thompson sampling to staged clinical trials with delayed outcomes, proving regret bounds and simulating oncology trial scenarios.",
        "review_text": "The regret analysis extends known techniques; Lemma 2 is the only novel step and its proof (Appendix A.2) relies on an independence assumption that delayed outcomes violate. The authors acknowledge this on line 214 but proceed anyway. Either justify the assumption empirically or weaken the claimed bound. The simulation study is well designed, particularly the misspecification sweep in Figure 4. I cannot recommend acceptance until the theory matches the setting. Happy to raise my score if clarified.",
        "human_aspects": aspects(3, 4, 5, 2, 4, 5, 4, 5, 1, 4, 4, 4, 5),
        "human_overall": 3.6,
        "reviewer_openalex_id": "A1982051842",
    },
    {
        "id": "r018",
        "title": "Bandit Algorithms for Adaptive Clinical Trial Design",
        "abstract": "We adapt Thompson sampling to staged clinical trials with delayed outcomes, proving regret bounds and simulating oncology trial scenarios.",
        "review_text": "I did not have time to read the appendix. The main text is okay. The topic is relevant. Weak accept.",
        "human_aspects": aspects(2, 1, 1, 3, 1, 2, 2, 3, 4, 2, 3, 3, 3),
        "human_overall": 1.7,
    },
    {
        "id": "r019",
        "title": "Compositional Generalization in Vision-Language Models",
        "abstract": "Through controlled probes we measure whether vision-language models bind attributes to objects compositionally, finding systematic failures and proposing a contrastive fix.",
        "review_text": "The probe construction is the paper's best part: Section 2 controls for co-occurrence statistics, which previous work ignored, and the finding in Table 1 that binding accuracy drops to chance is striking. The proposed contrastive fix is less convincing; gains in Table 3 are small and the method adds three hyperparameters. Questions: does the fix transfer to retrieval? How were negatives mined, exactly? The writing occasionally drifts into claims the data does not support, e.g. the last paragraph of Section 6.",
        "human_aspects": aspects(4, 4, 4, 3, 4, 4, 4, 4, 2, 4, 3, 4, 4),
        "human_overall": 3.7,
    },
    {
        "id": "r020",
        "title": "Compositional Generalization in Vision-Language Models",
        "abstract": "Through controlled probes we measure whether vision-language models bind attributes to objects compositionally, finding systematic failures and proposing a contrastive fix.",
        "review_text": "Solid analysis paper. The probes are careful and the negative result is important for the community. I have only minor comments: define binding accuracy before Table 1; Figure 2's legend is unreadable in print; cite the concurrent work on attribute binding from this year. The contrastive fix feels preliminary but the authors present it honestly as such. I recommend acceptance.",
        "human_aspects": aspects(4, 4, 3, 4, 4, 4, 4, 4, 2, 5, 4, 4, 4),
        "human_overall": 4.1,
        "reviewer_openalex_id": "A2610494255",
    },
    {
        "id": "r021",
        "title": "Streaming Estimation of Heavy-Tailed Network Traffic",
        "abstract": "A sketch-based streaming estimator tracks heavy-tailed flow statistics with bounded memory, with accuracy guarantees under adversarial packet orderings.",
        "review_text": "The memory bound in Theorem 3 is tight and the adversarial-ordering analysis is new to me. The systems evaluation is weaker: only synthetic traces are used, and the comparison omits the standard count-min baseline with conservative update. Please run at least one real trace (CAIDA is public) and add the missing baseline. Also, the constant in Eq. 9 looks wrong; I compute 4/epsilon^2, not 2/epsilon^2. Please check.",
        "human_aspects": aspects(4, 4, 5, 2, 4, 5, 4, 4, 1, 4, 4, 4, 4),
        "human_overall": 3.9,
    },
    {
        "id": "r022",
        "title": "Streaming Estimation of Heavy-Tailed Network Traffic",
        "abstract": "A sketch-based streaming estimator tracks heavy-tailed flow statistics with bounded memory, with accuracy guarantees under adversarial packet orderings.",
        "review_text": "The paper was hard for me to follow and I suspect it is wrong somewhere, although I could not find the error. The experiments seem limited. I defer to other reviewers.",
        "human_aspects": aspects(2, 2, 1, 2, 1, 2, 2, 3, 5, 2, 3, 2, 3),
        "human_overall": 1.5,
    },
    {
        "id": "r023",
        "title": "Offline Reinforcement Learning with Conservative Value Expansion",
        "abstract": "We combine model-based value expansion with a conservatism penalty for offline reinforcement learning, improving performance on the D4RL benchmark suite.",
        "review_text": "This is a competent combination paper. Each ingredient is known, but the combination is executed carefully: the penalty coefficient ablation (Figure 3), the model-error analysis (Section 5.2), and the full hyperparameter table (Appendix D) are all appreciated. The D4RL gains in Table 2 are consistent though incremental. I would like to see one experiment beyond D4RL, and a comparison of wall-clock cost, since model rollouts are expensive. Borderline accept from me; the honesty of the limitations section (Section 7) pushes me positive.",
        "human_aspects": aspects(4, 5, 4, 3, 4, 4, 4, 4, 2, 5, 4, 4, 4),
        "human_overall": 3.8,
        "reviewer_openalex_id": "A3207415341",
    },
    {
        "id": "r024",
        "title": "Offline Reinforcement Learning with Conservative Value Expansion",
        "abstract": "We combine model-based value expansion with a conservatism penalty for offline reinforcement learning, improving performance on the D4RL benchmark suite.",
        "review_text": "Why was this submitted here? The contribution is a trivial combination of [3] and [7]. The authors should read the literature before wasting everyone's time. The experiments do not fix this. Strong reject. Also the title promises more than the paper delivers, which is typical for this subfield lately.",
        "human_aspects": aspects(1, 2, 1, 1, 1, 3, 1, 3, 2, 1, 1, 3, 3),
        "human_overall": 1.1,
    },
]


def write_corpus():
    path = FIXTURES / "corpus.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for record in CORPUS:
            fh.write(json.dumps(record, sort_keys=True, ensure_ascii=False) + "\n")
    print(f"wrote {path} ({len(CORPUS)} records)")


def write_goldens():
    sys.path.insert(0, str(FIXTURES.parents[1] / "src"))
    from revqual.engine import ReviewInput
    from revqual.judge import build_prompt, default_rubric
    from revqual.textmetrics import compute_structured_metrics

    first = CORPUS[0]
    review = ReviewInput.from_dict(first)

    prompt = build_prompt(review, default_rubric().aspects)
    (FIXTURES / "golden_prompt.txt").write_text(prompt + "\n", encoding="utf-8")
    print("wrote golden_prompt.txt")

    metrics = compute_structured_metrics(first["review_text"], first["title"] + " " + first["abstract"])
    (FIXTURES / "golden_metrics.json").write_text(
        json.dumps(metrics.to_dict(), sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    print("wrote golden_metrics.json")

    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "audit.jsonl"
        subprocess.run(
            [
                sys.executable, "-m", "revqual.cli", "audit",
                "--corpus", str(FIXTURES / "corpus.jsonl"),
                "--out", str(out),
                "--judge", "mock", "--openalex", "mock",
                "--concurrency", "1",
            ],
            check=True,
        )
        lines = []
        for line in out.read_text(encoding="utf-8").splitlines():
            doc = json.loads(line)
            doc.pop("timings", None)
            lines.append(json.dumps(doc, sort_keys=True))
        (FIXTURES / "golden_audit.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("wrote golden_audit.jsonl")


if __name__ == "__main__":
    write_corpus()
    write_goldens()
