import hashlib
import logging

from django.db import models

logger = logging.getLogger(__name__)


def sha256_of(text):
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


class EvaluationRun(models.Model):
    """
    A finished evaluation: the structured report plus enough identifiers
    to tell which corpus and which system output produced it
    """
    # Inputs
    corpus_name = models.CharField(max_length=255)
    corpus_sha256 = models.CharField(max_length=64, db_index=True)
    hypotheses_name = models.CharField(max_length=255)
    hypotheses_sha256 = models.CharField(max_length=64, db_index=True)
    language_pair = models.CharField(max_length=16, blank=True)

    # Headline numbers (All / Overall)
    n_records = models.PositiveIntegerField(default=0)
    n_excluded = models.PositiveIntegerField(default=0)
    bleu_diff = models.FloatField(null=True, blank=True)
    accuracy_diff = models.FloatField(null=True, blank=True)

    # Structured report document
    report = models.JSONField(default=dict)

    # Timestamps
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = 'Evaluation run'
        verbose_name_plural = 'Evaluation runs'
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"Run {self.pk}: {self.hypotheses_name} on {self.corpus_name}"

    @classmethod
    def record(cls, report, corpus_text, hypotheses_text):
        """Store ``report`` (an ``EvalReport``) and return the saved run"""
        from .serializers import EvalReportSerializer

        headline = report.cell('All', 'Overall')
        run = cls.objects.create(
            corpus_name=report.corpus,
            corpus_sha256=sha256_of(corpus_text),
            hypotheses_name=report.hypotheses,
            hypotheses_sha256=sha256_of(hypotheses_text),
            language_pair=report.language_pair,
            n_records=report.n_records,
            n_excluded=report.n_excluded,
            bleu_diff=headline.bleu.diff if headline.bleu else None,
            accuracy_diff=headline.accuracy.diff if headline.accuracy else None,
            report=EvalReportSerializer(report).data,
        )
        logger.info("Saved evaluation run %s", run.pk)
        return run
