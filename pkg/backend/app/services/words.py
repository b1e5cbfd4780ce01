import logging
from typing import Tuple

from .grammar import parse_twist_word
from .kirby import ModelDiagram, model_from_word
from .oracle import words_equal
from .twists import Factorization, factorize, verify_factorization

logger = logging.getLogger(__name__)


class WordService:
    def factorize(self, n: int, text: str) -> Tuple[Factorization, bool]:
        word = parse_twist_word(text, n)
        result = factorize(word)
        verified = verify_factorization(word, result)
        if not verified:
            logger.error(f"Factorization of {text!r} on n={n} failed the oracle round trip")
        return result, verified

    def verify(self, n: int, lhs: str, rhs: str) -> bool:
        equal = words_equal(parse_twist_word(lhs, n), parse_twist_word(rhs, n))
        logger.info(f"verify n={n}: {'equal' if equal else 'unequal'}")
        return equal

    def model(self, n: int, text: str) -> ModelDiagram:
        return model_from_word(parse_twist_word(text, n))


word_service = WordService()
