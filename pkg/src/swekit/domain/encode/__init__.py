"""
encode: bag-of-words sentence encoding over a static embedding table.
"""

from .tokenizer import (
    CONTINUATION,
    SubwordTokenizer,
    load_piece_file,
    tokenizer_from_pieces,
    tokenizer_from_vocab,
)
from .resolve import resolve_word
from .sif import DEFAULT_SIF_ALPHA, sif_reweight, sif_weights, unigram_probabilities
from .encoder import (
    BatchEncoded,
    EncodeOptions,
    Encoded,
    SentenceEncoder,
    encode_batch,
    encode_sentence,
)

__all__ = [
    "CONTINUATION",
    "SubwordTokenizer",
    "load_piece_file",
    "tokenizer_from_pieces",
    "tokenizer_from_vocab",
    "resolve_word",
    "DEFAULT_SIF_ALPHA",
    "sif_reweight",
    "sif_weights",
    "unigram_probabilities",
    "BatchEncoded",
    "EncodeOptions",
    "Encoded",
    "SentenceEncoder",
    "encode_batch",
    "encode_sentence",
]
