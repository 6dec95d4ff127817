import string

import pytest
import torch
from transformers import DistilBertConfig, DistilBertModel, DistilBertTokenizerFast


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A local, content-pinned 768-dim model with a letters-only vocab.

    Random weights under a fixed seed: the exporter never trains, it only
    needs a deterministic function from subword ids to hidden states.
    """
    d = tmp_path_factory.mktemp("model")
    vocab = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    vocab += list(string.ascii_lowercase)
    vocab += [f"##{c}" for c in string.ascii_lowercase]
    vocab_path = d / "vocab.txt"
    vocab_path.write_text("\n".join(vocab) + "\n", encoding="utf-8")
    tokenizer = DistilBertTokenizerFast(vocab=str(vocab_path), do_lower_case=True)

    config = DistilBertConfig(
        vocab_size=tokenizer.vocab_size,
        dim=768,
        n_layers=1,
        n_heads=4,
        hidden_dim=256,
        max_position_embeddings=64,
    )
    torch.manual_seed(20240817)
    model = DistilBertModel(config)
    model.save_pretrained(d)
    tokenizer.save_pretrained(d)
    return d
