from django.db import models
from django.utils import timezone


class SuiteRun(models.Model):
    """A recorded verification suite with its full report"""
    suite = models.CharField(max_length=50)
    seed = models.DecimalField(max_digits=20, decimal_places=0)
    overall_pass = models.BooleanField(default=False)
    case_count = models.IntegerField(default=0)
    failure_count = models.IntegerField(default=0)
    report = models.JSONField()
    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        db_table = 'suite_run'
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.suite} seed={self.seed} {'PASS' if self.overall_pass else 'FAIL'}"

    @classmethod
    def from_report(cls, report):
        return cls.objects.create(
            suite=report.suite,
            seed=report.seed,
            overall_pass=report.overall_pass,
            case_count=len(report.cases),
            failure_count=len(report.failures),
            report=report.as_dict(),
        )
