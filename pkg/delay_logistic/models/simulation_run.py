from django.db import models
from django.utils import timezone


class SimulationRun(models.Model):
    """A recorded simulation and the outcome of its integration"""
    STATUS_CHOICES = [
        ('completed', 'Completed'),
        ('blown_up', 'Blown up'),
        ('aborted', 'Aborted'),
    ]

    r = models.FloatField()
    alpha = models.FloatField()
    history_spec = models.CharField(max_length=500)
    t_end = models.FloatField()
    rtol = models.FloatField()
    atol = models.FloatField()
    method = models.CharField(max_length=20, default='DOP853')
    status = models.CharField(max_length=20, choices=STATUS_CHOICES)
    t_final = models.FloatField()
    t_blowup = models.FloatField(null=True, blank=True)
    bracket_width = models.FloatField(null=True, blank=True)
    lower_bound = models.FloatField(null=True, blank=True)
    abort_reason = models.CharField(max_length=100, null=True, blank=True)
    n_steps = models.IntegerField(default=0)
    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        db_table = 'simulation_run'
        ordering = ['-created_at']

    def __str__(self):
        return f"r={self.r} alpha={self.alpha} {self.history_spec} ({self.status})"

    @classmethod
    def from_trajectory(cls, trajectory, history_spec, cfg):
        blowup = trajectory.blowup
        return cls.objects.create(
            r=trajectory.params.r,
            alpha=trajectory.params.alpha,
            history_spec=history_spec,
            t_end=cfg.t_end,
            rtol=cfg.rtol,
            atol=cfg.atol,
            method=cfg.method,
            status=trajectory.status.value,
            t_final=trajectory.t_final,
            t_blowup=blowup.t_blowup if blowup else None,
            bracket_width=blowup.bracket_width if blowup else None,
            lower_bound=blowup.lower_bound if blowup else None,
            abort_reason=trajectory.abort_reason,
            n_steps=trajectory.n_steps,
        )
