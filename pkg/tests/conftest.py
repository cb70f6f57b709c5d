import pytest

from uztranslit import alphabets, gencorpus, pipeline
from uztranslit.alphabets import CYR2LAT, LAT2CYR


@pytest.fixture(scope="session")
def cyr2lat_table():
    return alphabets.bundled_mapping_table(CYR2LAT)


@pytest.fixture(scope="session")
def lat2cyr_table():
    return alphabets.bundled_mapping_table(LAT2CYR)


@pytest.fixture(scope="session")
def lexicon():
    return pipeline.load_corpus(
        alphabets._data_path("lexicon.tsv")
    )


@pytest.fixture(scope="session")
def synthetic_small():
    return gencorpus.gen_corpus(400, seed=11)
