from django.contrib import admin

from .models import SimulationRun, SuiteRun


@admin.register(SimulationRun)
class SimulationRunAdmin(admin.ModelAdmin):
    list_display = ('created_at', 'r', 'alpha', 'history_spec', 'status', 't_final', 't_blowup', 'n_steps')
    list_filter = ('status',)


@admin.register(SuiteRun)
class SuiteRunAdmin(admin.ModelAdmin):
    list_display = ('created_at', 'suite', 'seed', 'overall_pass', 'case_count', 'failure_count')
    list_filter = ('suite', 'overall_pass')
