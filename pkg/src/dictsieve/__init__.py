"""Dictionary-based retrieval of topically relevant document subsets.

Extract a ranked term dictionary from a small reference collection (topic
model or tf-idf weighting), contextualize it with filtered sentence
co-occurrence statistics, rank a large target collection against it, and
evaluate parameter sweeps with pseudorelevance fusion.
"""

from .cooc import CoocMatrix, build_cooc, dice, filter_cooc, load_cooc, save_cooc
from .corpus import (
    Corpus,
    Document,
    TermStats,
    export_corpus,
    ingest_corpus,
    split_sentences,
    term_stats,
    tokenize,
)
from .dictionary import (
    Dictionary,
    DictionaryEntry,
    boost,
    extract_dictionary_tfidf,
    extract_dictionary_tm,
    load_dictionary,
    save_dictionary,
    term_weight,
)
from .evaluation import (
    EvalReport,
    PseudorelSet,
    SystemSet,
    condorcet_rank,
    evaluate_sweep,
    generate_sweep,
    map_score,
    norm_weights,
    precision_at_ranges,
    select_candidates,
    select_pseudorels,
)
from .retrieval import RankedEntry, RankedList, load_ranked_list, rank_collection, save_ranked_list
from .scoring import (
    CollectionNorms,
    ScoringConfig,
    compute_norms,
    score_context,
    score_dict,
    tfsim,
)
from .topics import (
    TopicModelResult,
    exclude_topics,
    fit_lda,
    load_model,
    save_model,
    top_terms,
)

__version__ = "0.1.0"

__all__ = [
    "CollectionNorms",
    "CoocMatrix",
    "Corpus",
    "Dictionary",
    "DictionaryEntry",
    "Document",
    "EvalReport",
    "PseudorelSet",
    "RankedEntry",
    "RankedList",
    "ScoringConfig",
    "SystemSet",
    "TermStats",
    "TopicModelResult",
    "boost",
    "build_cooc",
    "compute_norms",
    "condorcet_rank",
    "dice",
    "evaluate_sweep",
    "exclude_topics",
    "export_corpus",
    "extract_dictionary_tfidf",
    "extract_dictionary_tm",
    "filter_cooc",
    "fit_lda",
    "generate_sweep",
    "ingest_corpus",
    "load_cooc",
    "load_dictionary",
    "load_model",
    "load_ranked_list",
    "map_score",
    "norm_weights",
    "precision_at_ranges",
    "rank_collection",
    "save_cooc",
    "save_dictionary",
    "save_model",
    "save_ranked_list",
    "score_context",
    "score_dict",
    "select_candidates",
    "select_pseudorels",
    "split_sentences",
    "term_stats",
    "term_weight",
    "tfsim",
    "tokenize",
    "top_terms",
]
