"""
embed_core: vocabularies, embedding tables, sentence records and table files.
"""

from .vocab import (
    CASE_INSENSITIVE,
    CASE_SENSITIVE,
    LANG_SEP,
    Vocabulary,
    build_vocab,
    read_vocab_tsv,
    split_tag,
    tag_word,
    write_vocab_tsv,
)
from .table import EmbeddingTable, StageTag, truncate_vocab
from .formats import load_table, save_table
from .bags import TokenBags, bag_means, bags_from_records, bags_from_token_ids, drop_zero_means
from .sentence import SentenceRecord, iter_corpus_tokens, make_record, read_sentences, strip_punct, tokenize

__all__ = [
    "CASE_INSENSITIVE",
    "CASE_SENSITIVE",
    "LANG_SEP",
    "Vocabulary",
    "build_vocab",
    "read_vocab_tsv",
    "write_vocab_tsv",
    "split_tag",
    "tag_word",
    "EmbeddingTable",
    "StageTag",
    "truncate_vocab",
    "load_table",
    "save_table",
    "TokenBags",
    "bag_means",
    "bags_from_records",
    "bags_from_token_ids",
    "drop_zero_means",
    "SentenceRecord",
    "iter_corpus_tokens",
    "make_record",
    "read_sentences",
    "strip_punct",
    "tokenize",
]
